"""JSON documents for expansions, orbit reports and circle verdicts.

Integers stay JSON integers however large.  Interval endpoints and field
elements are written as exact strings (``"num/den"`` and ``"(a+b*w)/k"``)
so that a document parses back to the same values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Any

from .algebraic import SurdSpec, make_surd
from .diophantine import AllBad, CircleSpec, HasRationalPoint
from .expansion import Expansion, Script, expand
from .forms import FormMatrix, OrbitReport, Sigma
from .intervals import ComplexInterval, RealInterval
from .rings import KElt, RingElt, RingId

__all__ = [
    "dumps",
    "load_schema",
    "expansion_to_json",
    "expansion_from_json",
    "orbit_to_json",
    "orbit_from_json",
    "form_to_json",
    "form_from_json",
    "circle_to_json",
    "circle_from_json",
]

EXPANSION_SCHEMA = "expansion-v1"
ORBIT_SCHEMA = "orbit-v1"
CIRCLE_SCHEMA = "circle-v1"


def dumps(doc: Any) -> str:
    """Canonical text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_schema(name: str) -> dict:
    text = resources.files("complexcf").joinpath("schema", f"{name}.json").read_text()
    return json.loads(text)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _real(iv: RealInterval) -> list[str]:
    return [_frac(iv.lower), _frac(iv.upper)]


def _real_back(pair: list[str], bits: int) -> RealInterval:
    return RealInterval.from_bounds(Fraction(pair[0]), Fraction(pair[1]), bits)


def _complex(iv: ComplexInterval) -> dict:
    return {"re": _real(iv.re), "im": _real(iv.im)}


def _complex_back(doc: dict, bits: int) -> ComplexInterval:
    return ComplexInterval(_real_back(doc["re"], bits), _real_back(doc["im"], bits))


def _elt(x: RingElt) -> list[int]:
    return [x.a, x.b]


def _elt_back(pair: list[int], ring: RingId) -> RingElt:
    return RingElt(pair[0], pair[1], ring)


# ---------------------------------------------------------------------------
# Expansions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Replayed(Script):
    """Script replaying recorded quotients while reporting the original chooser."""

    original: tuple = ()

    def describe(self) -> dict:
        return json.loads(self.original[0]) if self.original else super().describe()


def expansion_to_json(e: Expansion) -> dict:
    z = e.z0
    steps = []
    for r in e.steps:
        steps.append(
            {
                "n": r.n,
                "a": _elt(r.a),
                "p": _elt(r.p),
                "q": _elt(r.q),
                "det": r.det,
                "delta": _complex(r.delta),
                "dist": _real(r.dist),
                "q_mono": r.q_mono,
            }
        )
    return {
        "schema": EXPANSION_SCHEMA,
        "ring": e.ring.tag,
        "poly": [str(z.A), str(z.B), str(z.C)],
        "root_sign": z.sign,
        "chooser": e.chooser.describe(),
        "depth": e.depth,
        "bits": e.steps[0].delta.bits,
        "radius": _real(e.radius_so_far),
        "steps": steps,
    }


def _surd_back(ring: RingId, poly: list[str], sign: int) -> SurdSpec:
    spec = make_surd(ring, *(RingElt.parse(c, ring) for c in poly))
    if spec.sign != sign:
        other = SurdSpec(ring, spec.A, spec.B, spec.C, sign, max_bits=spec.max_bits)
        other.root_box = other.enclosure()
        spec = other
    return spec


def expansion_from_json(doc: dict) -> Expansion:
    """Rebuild an expansion by replaying its recorded partial quotients."""
    if doc.get("schema") != EXPANSION_SCHEMA:
        raise ValueError(f"not an {EXPANSION_SCHEMA} document")
    ring = RingId.from_tag(doc["ring"])
    z = _surd_back(ring, doc["poly"], doc["root_sign"])
    quotients = tuple(_elt_back(s["a"], ring) for s in doc["steps"])
    chooser = Replayed(quotients, (), (json.dumps(doc["chooser"], sort_keys=True),))
    e = expand(z, chooser, doc["depth"], bits=doc["bits"])
    for rec, s in zip(e.steps, doc["steps"]):
        if _elt(rec.p) != s["p"] or _elt(rec.q) != s["q"] or rec.det != s["det"]:
            raise ValueError(f"replay disagrees with the document at index {rec.n}")
    return e


# ---------------------------------------------------------------------------
# Forms and orbits
# ---------------------------------------------------------------------------


def form_to_json(X: FormMatrix) -> dict:
    return {
        "sigma": X.sigma.value,
        "k": X.k,
        "entries": [str(x) for x in X.entries],
    }


def form_from_json(doc: dict, ring: RingId) -> FormMatrix:
    entries = [KElt.parse(x, ring) for x in doc["entries"]]
    return FormMatrix(*entries, sigma=Sigma(doc["sigma"]), k=doc["k"], ring=ring)


def orbit_to_json(report: OrbitReport, X: FormMatrix, *, depth: int | None = None, radius: Fraction | None = None) -> dict:
    doc = {
        "schema": ORBIT_SCHEMA,
        "ring": X.ring.tag,
        "form": form_to_json(X),
        "distinct": [form_to_json(m) for m in report.distinct],
        "stabilization_index": report.stabilization_index,
        "per_index": [[n, i] for n, i in sorted(report.per_index.items())],
        "zero_convergents": list(report.zero_convergents),
    }
    if depth is not None:
        doc["depth"] = depth
    if radius is not None:
        doc["neat_radius"] = _frac(radius)
    return doc


def orbit_from_json(doc: dict) -> tuple[OrbitReport, FormMatrix]:
    if doc.get("schema") != ORBIT_SCHEMA:
        raise ValueError(f"not an {ORBIT_SCHEMA} document")
    ring = RingId.from_tag(doc["ring"])
    report = OrbitReport(
        distinct=[form_from_json(m, ring) for m in doc["distinct"]],
        stabilization_index=doc["stabilization_index"],
        per_index={n: i for n, i in doc["per_index"]},
        zero_convergents=list(doc["zero_convergents"]),
    )
    return report, form_from_json(doc["form"], ring)


# ---------------------------------------------------------------------------
# Circles
# ---------------------------------------------------------------------------


def circle_to_json(c: CircleSpec, verdict: AllBad | HasRationalPoint) -> dict:
    if isinstance(verdict, AllBad):
        v = {"kind": "AllBad", "failing": list(verdict.failing), "moduli": list(verdict.moduli)}
    else:
        v = {"kind": "HasRationalPoint", "witness": str(verdict.witness)}
    return {
        "schema": CIRCLE_SCHEMA,
        "ring": c.ring.tag,
        "center": str(c.center),
        "radius_sq": _frac(c.radius_sq),
        "verdict": v,
    }


def circle_from_json(doc: dict) -> tuple[CircleSpec, AllBad | HasRationalPoint]:
    if doc.get("schema") != CIRCLE_SCHEMA:
        raise ValueError(f"not a {CIRCLE_SCHEMA} document")
    ring = RingId.from_tag(doc["ring"])
    c = CircleSpec(ring, KElt.parse(doc["center"], ring), Fraction(doc["radius_sq"]))
    v = doc["verdict"]
    if v["kind"] == "AllBad":
        verdict = AllBad(tuple(v["failing"]), tuple(v["moduli"]))
    else:
        verdict = HasRationalPoint(KElt.parse(v["witness"], ring))
    return c, verdict
