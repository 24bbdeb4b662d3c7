"""Flat ``key = value`` spec files.

Example::

    # Brownian oscillator, gamma=2 kappa=1 h=0.5
    p = 2
    phi = 1, -0.25
    init = 0, 1
    eps = 0.001

Floats are written with 17 significant digits so that a round trip through
text is exact.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ValidationError
from .polyroots import RecurrenceSpec

KEYS = ("p", "phi", "init", "eps")


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def dumps(spec: RecurrenceSpec, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines += [
        f"p = {spec.p}",
        "phi = " + ", ".join(fmt(c) for c in spec.phi),
        "init = " + ", ".join(fmt(c) for c in spec.init),
        f"eps = {fmt(spec.eps)}",
    ]
    return "\n".join(lines) + "\n"


def _floats(key: str, text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError(f"{key}: cannot parse {text!r} as comma-separated reals") from exc


def loads(text: str) -> RecurrenceSpec:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ValidationError(f"line {lineno}: unknown key {key!r}")
        fields[key] = value
    for key in ("phi", "init"):
        if key not in fields:
            raise ValidationError(f"missing required key {key!r}")
    phi = _floats("phi", fields["phi"])
    init = _floats("init", fields["init"])
    if "p" in fields:
        try:
            p = int(fields["p"])
        except ValueError as exc:
            raise ValidationError(f"p: {fields['p']!r} is not an integer") from exc
        if p != len(phi):
            raise ValidationError(f"invariant len(phi) == p violated: p={p}, len(phi)={len(phi)}")
    eps = float(fields["eps"]) if "eps" in fields else 1.0
    return RecurrenceSpec(phi, init, eps)


def load(path: str | Path) -> RecurrenceSpec:
    return loads(Path(path).read_text())


def dump(spec: RecurrenceSpec, path: str | Path, comment: str | None = None) -> None:
    Path(path).write_text(dumps(spec, comment))
