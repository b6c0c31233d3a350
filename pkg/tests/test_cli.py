import json

import pytest

from rpqdet.cli import main
from rpqdet.gadget import build_grid, decorate
from rpqdet.graphs import endpointed_to_json, graph_from_json
from rpqdet.ogtp import (
    all_black_tiling,
    instance_to_json,
    reduction_from_json,
    reduction_to_json,
    tiling_to_json,
)


@pytest.fixture(scope="module")
def files(tmp_path_factory, black_instance, black_reduction, blocked_instance):
    root = tmp_path_factory.mktemp("cli")
    paths = {
        "ogtp": root / "black.json",
        "blocked": root / "blocked.json",
        "instance": root / "instance.json",
        "grid2": root / "grid2.json",
        "model2": root / "model2.json",
    }
    paths["ogtp"].write_text(instance_to_json(black_instance))
    paths["blocked"].write_text(instance_to_json(blocked_instance))
    paths["instance"].write_text(reduction_to_json(black_reduction))
    paths["grid2"].write_text(endpointed_to_json(build_grid(2)))
    paths["model2"].write_text(endpointed_to_json(
        decorate(build_grid(2), all_black_tiling(2))))
    paths["root"] = root
    return paths


# --------------------------------------------------------------------------
# eval


def test_eval_grid_end_marker(files, capsys):
    code = main(["eval", "--graph", str(files["grid2"]), "--query", "G:omega"])
    assert code == 0
    assert capsys.readouterr().out == "v_2_2 b\n"


def test_eval_empty_result(files, capsys):
    code = main(["eval", "--graph", str(files["grid2"]),
                 "--query", "G:omega G:omega"])
    assert code == 0
    assert capsys.readouterr().out == ""


def test_eval_bad_regex_exits_2(files, capsys):
    code = main(["eval", "--graph", str(files["grid2"]), "--query", "G:omega +"])
    assert code == 2
    err = capsys.readouterr().err
    assert err.startswith("error:")
    assert "position" in err


# --------------------------------------------------------------------------
# reduce


def test_reduce_writes_deterministic_instance(files, capsys, black_reduction):
    out = files["root"] / "reduced.json"
    assert main(["reduce", str(files["ogtp"]), "--out", str(out)]) == 0
    first = out.read_text()
    assert main(["reduce", str(files["ogtp"]), "--out", str(out)]) == 0
    assert out.read_text() == first
    red = reduction_from_json(first)
    assert len(red.views.good) == 8
    assert len(red.views.bad) == 2
    assert len(red.views.ugly) == 2
    assert first == reduction_to_json(black_reduction)


def test_reduce_malformed_instance_exits_2(files, capsys):
    bad = files["root"] / "bad_ogtp.json"
    bad.write_text(json.dumps({"shades": ["grey"], "forbidden": []}))
    assert main(["reduce", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


# --------------------------------------------------------------------------
# play


def test_play_guided_reaches_fixpoint_at_round_three(files, capsys):
    code = main(["play", str(files["instance"]), "--strategy", "guided",
                 "--model", str(files["model2"]),
                 "--initial-word",
                 "alpha A-H-C-black B-V-C-black A-H-C-black B-V-C-black omega"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "WON_FIXPOINT round=3"


def test_play_warm_initial_word_loses(files, capsys):
    code = main(["play", str(files["instance"]),
                 "--initial-word", "alpha A-H-W-black omega"])
    assert code == 1
    out = capsys.readouterr().out
    assert out.startswith("LOST round=")
    assert int(out.strip().rsplit("=", 1)[1]) <= 2


def test_play_rejects_words_outside_q0(files, capsys):
    code = main(["play", str(files["instance"]),
                 "--initial-word", "alpha omega"])
    assert code == 2
    assert "not in the q0 language" in capsys.readouterr().err


def test_play_scripted_replay_is_byte_identical(files, capsys):
    t1 = files["root"] / "t1.jsonl"
    code = main(["play", str(files["instance"]),
                 "--initial-cap", "4", "--out", str(t1)])
    assert code in (0, 1, 3)
    first = t1.read_text()
    t2 = files["root"] / "t2.jsonl"
    code = main(["play", str(files["instance"]), "--strategy", "scripted",
                 "--trace", str(t1), "--out", str(t2)])
    assert t2.read_text() == first
    capsys.readouterr()


# --------------------------------------------------------------------------
# search and verify


def test_search_finds_and_verify_accepts_a_certificate(files, capsys):
    cert = files["root"] / "cert.json"
    code = main(["search", str(files["instance"]), "--max-initial-len", "4",
                 "--max-witness-len", "3", "--max-rounds", "6",
                 "--max-branches", "4", "--out", str(cert)])
    assert code == 0
    assert capsys.readouterr().out.splitlines()[0] == "NONDETERMINATE"
    code = main(["verify", str(cert), str(files["instance"])])
    assert code == 0
    assert capsys.readouterr().out.strip() == "OK"


def test_search_parallel_matches_serial(files, capsys):
    cert = files["root"] / "cert_serial.json"
    assert main(["search", str(files["instance"]), "--max-initial-len", "4",
                 "--out", str(cert)]) == 0
    cert2 = files["root"] / "cert_jobs.json"
    assert main(["search", str(files["instance"]), "--max-initial-len", "4",
                 "--jobs", "2", "--out", str(cert2)]) == 0
    assert cert2.read_text() == cert.read_text()
    capsys.readouterr()


def test_search_round_starved_is_inconclusive(files, capsys):
    code = main(["search", str(files["instance"]), "--max-initial-len", "4",
                 "--max-rounds", "1"])
    assert code == 3
    assert capsys.readouterr().out.strip() == "INCONCLUSIVE"


def test_search_blocked_instance_all_plays_lose(files, capsys):
    reduced = files["root"] / "blocked_instance.json"
    assert main(["reduce", str(files["blocked"]), "--out", str(reduced)]) == 0
    code = main(["search", str(reduced), "--max-initial-len", "4"])
    assert code == 1
    assert capsys.readouterr().out.strip() == "ALL_PLAYS_LOSE"


def test_verify_reports_the_failing_condition(files, capsys):
    doc = json.loads(files["model2"].read_text())
    doc["edges"] = [e for e in doc["edges"] if e["label"] != "G:omega"]
    broken = files["root"] / "broken.json"
    broken.write_text(json.dumps(doc))
    code = main(["verify", str(broken), str(files["instance"])])
    assert code == 1
    out = capsys.readouterr().out
    assert "G(Q0) fails" in out


# --------------------------------------------------------------------------
# grid and solve-ogtp


def test_grid_command_emits_decorated_grid(files, capsys):
    tiling = files["root"] / "tiling1.json"
    tiling.write_text(tiling_to_json(all_black_tiling(1)))
    out = files["root"] / "grid1.json"
    assert main(["grid", "1", "--tiling", str(tiling),
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    g = graph_from_json(json.dumps({"vertices": doc["vertices"],
                                    "edges": doc["edges"]}))
    assert len(g.vertices) == 6
    assert all(lab.shade == "black" for _, lab, _ in g.edges if lab.is_sigma0)
    assert (doc["a"], doc["b"]) == ("a", "b")


def test_solve_ogtp_prints_a_tiling(files, capsys):
    assert main(["solve-ogtp", str(files["ogtp"])]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["n"] == 1


def test_solve_ogtp_prints_none_on_unsolvable(files, capsys):
    assert main(["solve-ogtp", str(files["blocked"]), "--max-n", "2"]) == 1
    assert capsys.readouterr().out.strip() == "NONE"


def test_missing_file_exits_2(capsys):
    assert main(["reduce", "/nonexistent/input.json"]) == 2
    assert "error:" in capsys.readouterr().err
