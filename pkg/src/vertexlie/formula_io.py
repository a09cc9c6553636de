"""Read and write formulas as sectioned plain-text files.

The format is line oriented; '#' starts a comment, blank lines are
ignored.  Sections:

    [meta]                  optional key = value pairs (name, ...)
    [basis]                 one line per vector: LABEL PARITY [WEIGHT]
    [central]               one line naming the central vector
    [conformal]             'omega = LABEL' and 'c = LABEL'
    [constants]             one line per product:
                            U N V : K TARGET COEFF [, K TARGET COEFF]...

Parities are 'even'/'odd'; every number is an integer or 'p/q' — no
floating point anywhere.  Export is canonical: fixed section order,
basis order, products sorted by (u, n, v), terms by (k, target), so
export(parse(export(spec))) is byte-identical to export(spec).
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from .formula import EVEN, ODD, FormulaError, FormulaSpec, rat

_PARITY_NAMES = {"even": EVEN, "odd": ODD}
_SECTIONS = ("meta", "basis", "central", "conformal", "constants")


class FormulaFileError(FormulaError):
    """Parse failure with the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def _rat_or_fail(token: str, line: int) -> Fraction:
    try:
        return rat(token)
    except (ValueError, ZeroDivisionError):
        raise FormulaFileError(line, f"bad rational {token!r}") from None


def parse_formula(text: str) -> FormulaSpec:
    """Parse the sectioned text format into a FormulaSpec."""
    basis: List[tuple] = []
    constants: dict = {}
    meta: dict = {}
    central: Optional[str] = None
    conformal_parts: dict = {}
    section: Optional[str] = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise FormulaFileError(lineno, f"unknown section {section!r}")
            continue
        if section is None:
            raise FormulaFileError(lineno, "content before any [section] header")
        if section == "meta":
            if "=" not in line:
                raise FormulaFileError(lineno, "meta lines look like 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            meta[key] = value
        elif section == "basis":
            parts = line.split()
            if len(parts) not in (2, 3):
                raise FormulaFileError(lineno, "basis lines look like 'LABEL PARITY [WEIGHT]'")
            label, parity_name = parts[0], parts[1].lower()
            if parity_name not in _PARITY_NAMES:
                raise FormulaFileError(lineno, f"parity must be even or odd, got {parts[1]!r}")
            weight = _rat_or_fail(parts[2], lineno) if len(parts) == 3 else None
            basis.append((label, _PARITY_NAMES[parity_name], weight))
        elif section == "central":
            if central is not None:
                raise FormulaFileError(lineno, "central vector named twice")
            central = line.split()[0]
        elif section == "conformal":
            if "=" not in line:
                raise FormulaFileError(lineno, "conformal lines look like 'omega = LABEL'")
            key, value = (part.strip() for part in line.split("=", 1))
            if key not in ("omega", "c"):
                raise FormulaFileError(lineno, f"conformal keys are omega and c, got {key!r}")
            conformal_parts[key] = value
        else:  # constants
            if ":" not in line:
                raise FormulaFileError(lineno, "product lines look like 'U N V : K TARGET COEFF, ...'")
            head, tail = line.split(":", 1)
            head_parts = head.split()
            if len(head_parts) != 3:
                raise FormulaFileError(lineno, "product head must be 'U N V'")
            u, n_token, v = head_parts
            try:
                n = int(n_token)
            except ValueError:
                raise FormulaFileError(lineno, f"bad product index {n_token!r}") from None
            if n < 0:
                raise FormulaFileError(lineno, "product index must be nonnegative")
            terms: dict = {}
            for chunk in tail.split(","):
                parts = chunk.split()
                if len(parts) != 3:
                    raise FormulaFileError(lineno, "each term is 'K TARGET COEFF'")
                try:
                    k = int(parts[0])
                except ValueError:
                    raise FormulaFileError(lineno, f"bad D-power {parts[0]!r}") from None
                if k < 0:
                    raise FormulaFileError(lineno, "D-power must be nonnegative")
                coeff = _rat_or_fail(parts[2], lineno)
                key = (k, parts[1])
                terms[key] = terms.get(key, Fraction(0)) + coeff
            if (u, n, v) in constants:
                raise FormulaFileError(lineno, f"product ({u},{n},{v}) given twice")
            constants[(u, n, v)] = terms

    weights = [w for (_l, _p, w) in basis]
    if any(w is not None for w in weights) and not all(w is not None for w in weights):
        raise FormulaFileError(0, "weights must be given for all basis vectors or none")
    entries = [(l, p) if w is None else (l, p, w) for (l, p, w) in basis]
    conformal = None
    if conformal_parts:
        if set(conformal_parts) != {"omega", "c"}:
            raise FormulaFileError(0, "conformal section needs both omega and c")
        conformal = (conformal_parts["omega"], conformal_parts["c"])
    try:
        return FormulaSpec(entries, constants, central=central, conformal=conformal,
                           name=meta.get("name"))
    except (KeyError, ValueError) as exc:
        raise FormulaFileError(0, str(exc)) from None


def load_formula(path) -> FormulaSpec:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_formula(handle.read())


def export_formula(spec: FormulaSpec) -> str:
    """Canonical text rendering (deterministic, re-parses identically)."""
    lines: List[str] = []
    if spec.name:
        lines += ["[meta]", f"name = {spec.name}", ""]
    lines.append("[basis]")
    for vec in spec.vectors:
        parity = "odd" if vec.parity == ODD else "even"
        if vec.weight is None:
            lines.append(f"{vec.label} {parity}")
        else:
            lines.append(f"{vec.label} {parity} {vec.weight}")
    lines.append("")
    if spec.central is not None:
        lines += ["[central]", spec.vectors[spec.central].label, ""]
    if spec.conformal is not None:
        oid, cid = spec.conformal
        lines += ["[conformal]",
                  f"omega = {spec.vectors[oid].label}",
                  f"c = {spec.vectors[cid].label}", ""]
    lines.append("[constants]")
    labels = spec.labels
    for (uid, n, vid), elt in spec.constant_entries():
        terms = ", ".join(f"{k} {labels[tid]} {coeff}"
                          for (k, tid), coeff in elt.items())
        lines.append(f"{labels[uid]} {n} {labels[vid]} : {terms}")
    lines.append("")
    return "\n".join(lines)


def save_formula(spec: FormulaSpec, path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(export_formula(spec))
