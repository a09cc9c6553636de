from __future__ import annotations

import json
from fractions import Fraction as F

import pytest

from vertexlie import PRESETS, FormulaSpec, preset, virasoro
from vertexlie.cli import main
from vertexlie.formula_io import (
    FormulaFileError,
    export_formula,
    load_formula,
    parse_formula,
    save_formula,
)

# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def test_round_trip_every_preset() -> None:
    for name in sorted(PRESETS):
        spec = preset(name)
        text = export_formula(spec)
        again = parse_formula(text)
        assert again == spec, name
        assert export_formula(again) == text, name


def test_round_trip_via_files(tmp_path) -> None:
    path = tmp_path / "formula.vla"
    save_formula(virasoro(), path)
    assert load_formula(path) == virasoro()


def test_parse_minimal_ungraded() -> None:
    spec = parse_formula("""
[basis]
a even
b odd

[constants]
a 0 b : 0 b 1, 1 b -2/3
""")
    assert spec.labels == ("a", "b")
    assert not spec.graded
    assert spec.constant("a", 0, "b").coeff((1, spec.bid("b"))) == F(-2, 3)


def test_parse_comments_and_blank_lines() -> None:
    spec = parse_formula("""
# leading comment
[basis]
a even 1   # trailing comment

[constants]
a 0 a : 0 a 1
""")
    assert spec.weight("a") == 1


@pytest.mark.parametrize("text,fragment", [
    ("a even", "before any"),
    ("[what]\n", "unknown section"),
    ("[basis]\na maybe\n", "parity"),
    ("[basis]\na even x\n", "bad rational"),
    ("[basis]\na even 1\nb even\n", "all basis vectors or none"),
    ("[basis]\na even\n[constants]\na 0 a 0 a 1\n", "product lines"),
    ("[basis]\na even\n[constants]\na zero a : 0 a 1\n", "bad product index"),
    ("[basis]\na even\n[constants]\na -1 a : 0 a 1\n", "nonnegative"),
    ("[basis]\na even\n[constants]\na 0 a : 0 a\n", "each term"),
    ("[basis]\na even\n[constants]\na 0 a : 0 b 1\n", "unknown basis name"),
    ("[basis]\na even\n[constants]\na 0 a : 0 a 1\na 0 a : 0 a 1\n", "twice"),
    ("[basis]\na even\n[conformal]\nomega = a\n", "needs both"),
    ("[basis]\na even\n[central]\na\n[central]\na\n", "named twice"),
])
def test_parse_diagnostics(text: str, fragment: str) -> None:
    with pytest.raises(FormulaFileError) as err:
        parse_formula(text)
    assert fragment in str(err.value)


def test_parse_reports_line_numbers() -> None:
    with pytest.raises(FormulaFileError) as err:
        parse_formula("[basis]\na even\nb oddish\n")
    assert err.value.line == 3


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def test_cli_check_virasoro(capsys) -> None:
    code = main(["check", "--preset", "virasoro"])
    out = capsys.readouterr().out
    assert code == 0
    assert "verdict: injective_central_ideal" in out
    assert "conformal data: pass" in out


def test_cli_check_affine_exit_codes(capsys) -> None:
    assert main(["check", "--preset", "affine-sl2"]) == 0
    out = capsys.readouterr().out
    assert "verdict: injective_zero_ideal" in out
    assert main(["check", "--preset", "heisenberg"]) == 0
    capsys.readouterr()
    assert main(["check", "--preset", "novikov-flipped"]) == 1
    out = capsys.readouterr().out
    assert "undetermined" in out


def test_cli_check_window_flag(capsys) -> None:
    assert main(["check", "--preset", "heisenberg", "--window", "3"]) == 0
    out = capsys.readouterr().out
    assert "window 3: pass" in out


def test_cli_check_file_and_parse_error(tmp_path, capsys) -> None:
    good = tmp_path / "formula.vla"
    save_formula(virasoro(), good)
    assert main(["check", str(good)]) == 0
    capsys.readouterr()
    bad = tmp_path / "broken.toml"
    bad.write_text("[basis]\na maybe\n")
    assert main(["check", str(bad)]) == 2
    err = capsys.readouterr().err
    assert "line 2" in err


def test_cli_check_file_with_inadmissible_product(tmp_path, capsys) -> None:
    # a parseable file whose product fails the identities: exit 1 and a
    # witness defect outside the central span is printed
    path = tmp_path / "broken.toml"
    save_formula(preset("novikov-flipped"), path)
    assert main(["check", str(path)]) == 1
    out = capsys.readouterr().out
    assert "undetermined" in out
    assert "commutator" in out


def test_cli_check_json_schema(capsys) -> None:
    assert main(["check", "--preset", "heisenberg", "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert set(payload) == {"spec", "verdict", "defects", "dims", "result"}
    assert payload["dims"] is None
    assert payload["verdict"]["status"] == "injective_zero_ideal"
    assert payload["defects"][0]["value"][0]["coeff"] == "-1"


def test_cli_defect_listing(capsys) -> None:
    assert main(["defect", "--preset", "virasoro"]) == 0
    out = capsys.readouterr().out
    assert "-1/2*D.c" in out
    assert main(["defect", "--preset", "loop-abelian"]) == 0
    assert "no nonzero defects" in capsys.readouterr().out


def test_cli_bracket(capsys) -> None:
    assert main(["bracket", "--preset", "virasoro", "omega", "3", "omega", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "4*omega_1 + 1/2*c_-1"
    assert main(["bracket", "--preset", "heisenberg", "x", "1", "x", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "c_-1"
    assert main(["bracket", "--preset", "virasoro", "omega", "2", "c", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "0"


def test_cli_bracket_unknown_name(capsys) -> None:
    assert main(["bracket", "--preset", "virasoro", "nope", "0", "omega", "0"]) == 2
    assert "unknown basis name" in capsys.readouterr().err


def test_cli_verma_dims(capsys) -> None:
    assert main(["verma", "--preset", "virasoro", "--cutoff", "9", "--dims"]) == 0
    rows = [line.split("\t") for line in capsys.readouterr().out.splitlines()]
    dims = {row[0]: int(row[1]) for row in rows}
    assert [dims[str(k)] for k in range(10)] == [1, 0, 1, 1, 2, 2, 4, 4, 7, 8]
    assert main(["verma", "--preset", "heisenberg", "--cutoff", "7", "--dims",
                 "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert [payload["dims"][str(k)] for k in range(8)] == [1, 1, 2, 3, 5, 7, 11, 15]


def test_cli_verma_act_with_level(capsys) -> None:
    assert main(["verma", "--preset", "virasoro", "--cutoff", "6", "--level", "26",
                 "--act", "omega_3 omega_-1"]) == 0
    assert capsys.readouterr().out.strip() == "13 * 1"


def test_cli_verma_field(capsys) -> None:
    assert main(["verma", "--preset", "virasoro", "--cutoff", "8",
                 "--field", "omega_-1", "-1", "1"]) == 0
    assert capsys.readouterr().out.strip() == "omega_-1 1"


def test_cli_verma_refuses_undetermined(capsys) -> None:
    assert main(["verma", "--preset", "novikov-flipped", "--cutoff", "4",
                 "--dims"]) == 1
    err = capsys.readouterr().err
    assert "undetermined" in err and "check" in err


def test_cli_export_preset_round_trip(tmp_path, capsys) -> None:
    out_path = tmp_path / "exported.vla"
    assert main(["export-preset", "neveu-schwarz", "-o", str(out_path)]) == 0
    assert load_formula(out_path) == preset("neveu-schwarz")
    assert main(["export-preset", "virasoro"]) == 0
    text = capsys.readouterr().out
    assert parse_formula(text) == virasoro()


def test_cli_rejects_conflicting_inputs(capsys) -> None:
    assert main(["check", "--preset", "virasoro", "somefile"]) == 2
    assert "either" in capsys.readouterr().err
    assert main(["check"]) == 2
    assert "no input" in capsys.readouterr().err


def test_cli_check_bound_flag(capsys) -> None:
    # a wider bound still has a zero boundary row
    assert main(["check", "--preset", "virasoro", "--bound", "8"]) == 0
    capsys.readouterr()
    # a too-small user bound is reported, not silently accepted
    assert main(["check", "--preset", "virasoro", "--bound", "2"]) == 1
    assert "bound" in capsys.readouterr().err


def test_cli_verma_fractional_cutoff(capsys) -> None:
    assert main(["verma", "--preset", "neveu-schwarz", "--cutoff", "7/2",
                 "--dims"]) == 0
    rows = dict(line.split("\t") for line in capsys.readouterr().out.splitlines())
    assert rows["3/2"] == "1"
    assert rows["7/2"] == "2"
