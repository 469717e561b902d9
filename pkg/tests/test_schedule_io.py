from __future__ import annotations

import io

import pytest

from rotagen import (
    AssignmentMatrix,
    BooleanShiftArray,
    CatalogMismatchError,
    GenerationMode,
    ParseError,
    ShapeError,
    ValidationError,
    VersionError,
    build_coverage_table,
    export_csv,
    generate,
    load_combinations,
    merge_schedules,
    save_combinations,
)
from rotagen.phase1 import GenerationRequest, GenerationResult, ShiftArraySequence

from conftest import make_params


def roundtrip(result, request):
    buffer = io.BytesIO()
    save_combinations(result, request, buffer)
    buffer.seek(0)
    return load_combinations(buffer)


def rows_of(payload: bytes):
    return [line.split(",") for line in payload.decode("utf-8").splitlines()]


class TestCombinationFiles:
    def test_fast_run_round_trip(self, tmp_path):
        params = make_params(n_shift_types=1, weeks=2)
        request = GenerationRequest(params, GenerationMode.FAST, cluster_free_days=True)
        result = generate(request)
        target = tmp_path / "combos.txt"
        written = save_combinations(result, request, target)
        assert written == target.stat().st_size
        loaded = load_combinations(target)
        assert loaded.result == result
        assert loaded.request == request
        assert list(loaded.result.arrays) == list(result.arrays)

    def test_bytes_are_deterministic(self):
        params = make_params(n_shift_types=1, weeks=2, min_free_cluster=1)
        request = GenerationRequest(params, GenerationMode.FAST, fast_limit=10)
        result = generate(request)
        a, b = io.BytesIO(), io.BytesIO()
        save_combinations(result, request, a)
        save_combinations(result, request, b)
        assert a.getvalue() == b.getvalue()

    def test_empty_result(self):
        params = make_params(
            n_shift_types=1, weeks=1, weekly_hours=7 * 8.0, shift_hours=8.0,
            weekly_rest_hours=24.0, min_free_cluster=1,
        )
        request = GenerationRequest(params, GenerationMode.FULL)
        result = generate(request)
        assert result.solutions_found == 0
        buffer = io.BytesIO()
        save_combinations(result, request, buffer)
        assert buffer.getvalue().decode().count("\n") == 2  # magic + header only
        assert roundtrip(result, request).result == result

    def test_single_array_body_line(self):
        params = make_params(n_shift_types=1, weeks=2, min_free_cluster=1)
        request = GenerationRequest(params, GenerationMode.FAST, fast_limit=1)
        result = generate(request)
        buffer = io.BytesIO()
        save_combinations(result, request, buffer)
        body = buffer.getvalue().decode().splitlines()[2:]
        assert len(body) == 1
        assert len(body[0]) == 14
        assert set(body[0]) <= {"0", "1"}

    def test_rejects_unknown_magic(self):
        with pytest.raises(ParseError):
            load_combinations(io.BytesIO(b"something-else 1\n{}\n"))

    def test_rejects_unknown_version(self):
        with pytest.raises(VersionError):
            load_combinations(io.BytesIO(b"rotagen-combinations 99\n{}\n"))

    def test_rejects_bad_header_json(self):
        with pytest.raises(ParseError):
            load_combinations(io.BytesIO(b"rotagen-combinations 1\nnot json{\n"))

    def _valid_file(self) -> list:
        params = make_params(n_shift_types=1, weeks=2, min_free_cluster=1)
        request = GenerationRequest(params, GenerationMode.FAST, fast_limit=2)
        result = generate(request)
        buffer = io.BytesIO()
        save_combinations(result, request, buffer)
        return buffer.getvalue().decode().splitlines()

    def test_rejects_non_bitstring_line(self):
        lines = self._valid_file()
        lines[2] = lines[2][:-1] + "x"
        with pytest.raises(ParseError):
            load_combinations(io.BytesIO(("\n".join(lines) + "\n").encode()))

    def test_rejects_wrong_length(self):
        lines = self._valid_file()
        lines[2] = lines[2] + "1"
        with pytest.raises(ValidationError):
            load_combinations(io.BytesIO(("\n".join(lines) + "\n").encode()))

    def test_rejects_wrong_popcount(self):
        lines = self._valid_file()
        flipped = ("0" if lines[2][0] == "1" else "1") + lines[2][1:]
        lines[2] = flipped
        with pytest.raises(ValidationError):
            load_combinations(io.BytesIO(("\n".join(lines) + "\n").encode()))

    def test_rejects_count_mismatch(self):
        lines = self._valid_file()
        del lines[3]
        with pytest.raises(ValidationError):
            load_combinations(io.BytesIO(("\n".join(lines) + "\n").encode()))


def template_for(params, bits) -> AssignmentMatrix:
    array = BooleanShiftArray.from_bits(bits, params.fingerprint())
    return AssignmentMatrix.from_boolean_array(array, params)


class TestExportCsv:
    def test_all_free_single_week(self):
        params = make_params(n_shift_types=2, weeks=1, weekly_hours=0.0, min_free_cluster=1)
        payload = export_csv(template_for(params, [0] * 7), params)
        rows = rows_of(payload)
        assert rows[0] == ["Person"] + [
            "Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday",
        ]
        assert rows[1] == ["0"] + ["0"] * 7
        assert rows[2] == ["D"] + ["0"] * 7
        assert rows[3] == ["E"] + ["0"] * 7

    def test_person_rotation(self):
        params = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        matrix = template_for(params, [1] * 7 + [0] * 7)
        rows = rows_of(export_csv(matrix, params))
        assert rows[1] == ["0"] + ["D"] * 7 + ["0"] * 7
        assert rows[2] == ["1"] + ["0"] * 7 + ["D"] * 7

    def test_footer_matches_coverage_table(self):
        params = make_params(n_shift_types=2, weeks=3, min_free_cluster=1)
        bits = [1, 0, 1, 1, 0, 1, 1] + [1, 1, 0, 1, 1, 0, 0] + [0, 1, 1, 0, 1, 1, 1]
        matrix = template_for(params, bits)
        matrix = matrix.replace_cell(0, 2, 1).replace_cell(2, 4, 1)
        rows = rows_of(export_csv(matrix, params))
        table = build_coverage_table(matrix, 2)
        footer = rows[-2:]
        for s, row in enumerate(footer):
            assert row[0] == params.shift_catalog[s].label
            for k in range(params.weeks):
                for c in range(7):
                    assert int(row[1 + 7 * k + c]) == table.counts[c][s]

    def test_footer_invariant_under_person_rotation(self):
        params = make_params(n_shift_types=2, weeks=3, min_free_cluster=1)
        bits = [1, 0, 1, 1, 0, 1, 1] + [1, 1, 0, 1, 1, 0, 0] + [0, 1, 1, 0, 1, 1, 1]
        footers = []
        for rot in range(3):
            rolled = bits[7 * rot :] + bits[: 7 * rot]
            rows = rows_of(export_csv(template_for(params, rolled), params))
            footers.append(rows[-2:])
        assert footers[0] == footers[1] == footers[2]


class TestMerge:
    def test_merge_of_one_is_export(self):
        params = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        matrix = template_for(params, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0])
        assert merge_schedules([matrix], params) == export_csv(matrix, params)

    def test_two_four_week_schedules_give_eight_persons(self):
        params = make_params(n_shift_types=2, weeks=4, min_free_cluster=1)
        bits_a = [1, 1, 1, 1, 1, 0, 0] * 2 + [0, 0, 1, 1, 1, 1, 1] * 2
        bits_b = [0, 1, 1, 0, 1, 1, 1] * 2 + [1, 1, 0, 1, 1, 0, 0] * 2
        a, b = template_for(params, bits_a), template_for(params, bits_b)
        rows = rows_of(merge_schedules([a, b], params))
        person_rows = rows[1 : 1 + 8]
        assert [r[0] for r in person_rows] == [str(i) for i in range(8)]

    def test_merged_footer_is_elementwise_sum(self):
        params = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        a = template_for(params, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0])
        b = template_for(params, [0, 1, 1, 1, 1, 0, 0] + [1, 0, 1, 1, 0, 1, 1]).replace_cell(0, 1, 1)
        merged_footer = rows_of(merge_schedules([a, b], params))[-2:]
        foot_a = rows_of(export_csv(a, params))[-2:]
        foot_b = rows_of(export_csv(b, params))[-2:]
        for s in range(2):
            for j in range(1, 15):
                assert int(merged_footer[s][j]) == int(foot_a[s][j]) + int(foot_b[s][j])

    def test_person_ordering_is_concatenation(self):
        params = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        mats = [
            template_for(params, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0]),
            template_for(params, [0, 1, 1, 1, 1, 0, 0] + [1, 0, 1, 1, 0, 1, 1]),
            template_for(params, [1, 0, 1, 0, 1, 0, 1] + [0, 1, 0, 1, 0, 1, 0]),
        ]
        merged = rows_of(merge_schedules(mats, params))
        merged_bodies = [row[1:] for row in merged[1 : 1 + 6]]
        individual = []
        for m in mats:
            individual.extend(row[1:] for row in rows_of(export_csv(m, params))[1:3])
        assert merged_bodies == individual

    def test_catalog_mismatch(self):
        params_a = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        from rotagen import ShiftType

        params_b = make_params(
            n_shift_types=2, weeks=2, min_free_cluster=1,
            shift_catalog=(ShiftType("D", 6.0, 8.33), ShiftType("X", 15.0, 8.33)),
        )
        a = template_for(params_a, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0])
        b = template_for(params_b, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0])
        with pytest.raises(CatalogMismatchError):
            merge_schedules([a, b], [params_a, params_b])

    def test_weeks_mismatch(self):
        params_a = make_params(n_shift_types=2, weeks=2, min_free_cluster=1)
        params_b = make_params(n_shift_types=2, weeks=1, min_free_cluster=1)
        a = template_for(params_a, [1, 1, 0, 1, 0, 1, 1] + [0, 1, 1, 0, 1, 1, 0])
        b = template_for(params_b, [1, 1, 0, 1, 0, 1, 1])
        with pytest.raises(ShapeError):
            merge_schedules([a, b], [params_a, params_b])

    def test_empty_merge_rejected(self):
        with pytest.raises(ValueError):
            merge_schedules([], make_params())
