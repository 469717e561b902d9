from __future__ import annotations

import time

from fastapi.testclient import TestClient

from rotagen.cli import EXIT_INFEASIBLE, EXIT_MEMORY_GUARD, EXIT_OK, EXIT_PARSE, main
from rotagen.service import create_app

GEN_FLAGS = [
    "--shift-types", "2", "--workdays", "7", "--weeks", "4",
    "--shift-hours", "8.33", "--weekly-hours", "36", "--weekly-rest", "36",
    "--free-cluster", "2", "--cluster",
]


def test_generate_fast_writes_bounded_file(tmp_path, capsys):
    out = tmp_path / "combos.txt"
    code = main(["generate", *GEN_FLAGS, "--fast", "--out", str(out)])
    assert code == EXIT_OK
    lines = out.read_text().splitlines()
    assert len(lines) - 2 <= 100
    stdout = capsys.readouterr().out
    assert "combinations examined:" in stdout
    assert "solutions found:" in stdout
    assert "elapsed [s]:" in stdout


def test_generate_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert main(["generate", *GEN_FLAGS, "--fast", "--out", str(a)]) == EXIT_OK
    assert main(["generate", *GEN_FLAGS, "--fast", "--out", str(b)]) == EXIT_OK
    text_a = a.read_text().splitlines()
    text_b = b.read_text().splitlines()
    # identical apart from the elapsed timing field in the header
    assert text_a[0] == text_b[0]
    assert text_a[2:] == text_b[2:]


def test_solve_single_shift_exports_csv(tmp_path, capsys):
    combos = tmp_path / "combos.txt"
    main([
        "generate", "--shift-types", "1", "--weeks", "2", "--free-cluster", "1",
        "--fast", "--out", str(combos),
    ])
    csv_path = tmp_path / "schedule.csv"
    code = main([
        "solve", "--combinations", str(combos), "--index", "0", "--out", str(csv_path),
    ])
    assert code == EXIT_OK
    assert "solutions found:      1" in capsys.readouterr().out
    rows = csv_path.read_text().splitlines()
    assert rows[0].startswith("Person,Monday")
    assert len(rows) == 1 + 2 + 1  # header + two persons + one count row


def test_cli_composes_identically_to_service(tmp_path):
    combos = tmp_path / "combos.txt"
    main([
        "generate", "--shift-types", "1", "--weeks", "2", "--free-cluster", "1",
        "--full", "--out", str(combos),
    ])
    csv_path = tmp_path / "schedule.csv"
    main([
        "solve", "--combinations", str(combos), "--index", "3", "--out", str(csv_path),
    ])

    client = TestClient(create_app())
    params = dict(
        n_shift_types=1, workdays_per_week=7, weeks=2, shift_hours=8.33,
        weekly_hours=36.0, weekly_rest_hours=36.0, min_free_cluster=1,
    )
    job_id = client.post(
        "/phase1/jobs", json={"params": params, "mode": "FULL"}
    ).json()["job_id"]
    while client.get(f"/phase1/jobs/{job_id}").json()["state"] == "RUNNING":
        time.sleep(0.01)
    sid = client.post(
        "/phase2/sessions", json={"job_id": job_id, "combination_index": 3}
    ).json()["session_id"]
    client.post(f"/phase2/sessions/{sid}/solve", json={"method": "AUTO"})
    exported = client.post(f"/phase2/sessions/{sid}/export", json={"solution_index": 0})
    assert csv_path.read_bytes() == exported.content


def test_infeasible_exit_code(capsys):
    code = main([
        "generate", "--shift-types", "1", "--workdays", "5", "--weeks", "1",
        "--weekly-hours", "48", "--shift-hours", "8", "--free-cluster", "1", "--full",
    ])
    assert code == EXIT_INFEASIBLE


def test_memory_guard_exit_code(tmp_path, capsys):
    combos = tmp_path / "combos.txt"
    main(["generate", *GEN_FLAGS, "--fast", "--fast-limit", "5", "--out", str(combos)])
    code = main([
        "solve", "--combinations", str(combos), "--index", "0",
        "--memory-threshold", "10",
    ])
    assert code == EXIT_MEMORY_GUARD
    code = main([
        "solve", "--combinations", str(combos), "--index", "0",
        "--memory-threshold", "10", "--yes-memory",
    ])
    assert code == EXIT_OK


def test_parse_error_exit_code(tmp_path):
    bogus = tmp_path / "bogus.txt"
    bogus.write_text("not a combination file\n")
    code = main(["solve", "--combinations", str(bogus), "--index", "0"])
    assert code == EXIT_PARSE


def test_bench_phase1_contains_published_count(tmp_path, capsys):
    out = tmp_path / "bench.csv"
    code = main(["bench", "--suite", "phase1", "--max-weeks", "2", "--out", str(out)])
    assert code == EXIT_OK
    rows = [line.split(",") for line in out.read_text().splitlines()]
    assert rows[0] == ["type", "weeks", "time_fast", "time_full", "combinations", "solutions"]
    combos_by_week = {int(r[1]): int(r[4]) for r in rows[1:]}
    assert combos_by_week[2] == 2002
    weeks = sorted(combos_by_week)
    assert all(
        combos_by_week[a] < combos_by_week[b] for a, b in zip(weeks, weeks[1:])
    )


def test_bench_phase2_reports_guarded_row(tmp_path):
    out = tmp_path / "bench2.csv"
    code = main(["bench", "--suite", "phase2", "--out", str(out)])
    assert code == EXIT_OK
    rows = [line.split(",") for line in out.read_text().splitlines()]
    by_key = {(r[0], r[1]): r for r in rows[1:]}
    assert by_key[("2-shift", "14")][3] == "16384"
    assert by_key[("2-shift", "18")][3] == "262144"
    assert by_key[("3-shift", "14")][3] == "4782969"
    guarded = by_key[("3-shift", "18")]
    assert guarded[3] == "387420489"
    assert guarded[4] == "-" and guarded[7] == "-"
    assert guarded[5] == "6973568802"
