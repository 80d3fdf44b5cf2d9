"""Problem files and generated instance corpora.

A problem file is a single JSON object:

    {
      "field": "Q" | "QI" | "QT",
      "situation": "m" | "o",
      "certificate": {...} | {"auto": true},          (optional)
      "blocks": [
        {"localities": [{"kind": "p-adic", "p": 2}],
         "target": "1", "modulus": "8", "exceptional": false}
      ],
      "constraints": [...],                           (weak / strong)
      "excluded": {...},                              (strong)
      "pairs": [...],                                 (value / residue)
      "map": {"vars": [...], "components": [...]},    (func-approx)
      "witnesses": [{"locality": {...}, "point": ["..."]}]
    }

Element strings follow the field grammar; locality descriptors follow the
catalog.  {"auto": true} asks for a common certificate over every locality
that appears.  Serialization always writes the resolved certificate back
out, so a round-tripped file is self-contained.

The random generators below produce compatible instances by construction
plus a rejection sweep through check_compat, so a seeded corpus is stable
across runs.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .certificates import (
    Certificate,
    cert_from_descriptor,
    cert_to_descriptor,
    find_common_certificate,
    mixed_cert,
    uniformizer_cert,
)
from .elements import (
    FIELDS,
    Q,
    QI,
    QT,
    FieldElem,
    format_element,
    parse_element,
    q_elem,
    qi_elem,
    qt_elem,
)
from .errors import BadParams
from .localities import (
    Locality,
    complex_abs,
    descriptor,
    gauss_prime,
    locality_from_descriptor,
    p_adic,
    poly_adic,
    real_order,
)
from .qpoly import QPoly
from .ratmap import MapBlock, RationalMap, map_descriptor, map_from_descriptor
from .solver import (
    ApproxProblem,
    Block,
    Constraint,
    check_compat,
)

__all__ = [
    "problem_from_json",
    "problem_to_json",
    "constraints_from_json",
    "constraints_to_json",
    "pairs_from_json",
    "strong_from_json",
    "map_problem_from_json",
    "ledger_to_json",
    "random_problem",
    "random_weak_constraints",
    "random_strong_instance",
    "instance_size",
]


def _field_of(d: dict) -> str:
    f = d.get("field")
    if f not in FIELDS:
        raise BadParams(f"unknown field {f!r}; expected one of {', '.join(FIELDS)}")
    return f


def _elem(s, field: str) -> FieldElem:
    if not isinstance(s, str):
        raise BadParams(f"element values must be strings, got {type(s).__name__}")
    return parse_element(s, field)


def _resolve_cert(d: dict, field: str, members) -> Optional[Certificate]:
    spec = d.get("certificate")
    if spec is None:
        return None
    if not isinstance(spec, dict):
        raise BadParams("certificate must be an object")
    if spec.get("auto"):
        return find_common_certificate(list(members))
    return cert_from_descriptor(spec, field)


def _blocks_from_json(d: dict, field: str) -> list[Block]:
    raw = d.get("blocks")
    if not isinstance(raw, list) or not raw:
        raise BadParams("problem needs a nonempty 'blocks' list")
    blocks = []
    for b in raw:
        vs = tuple(locality_from_descriptor(loc) for loc in b["localities"])
        blocks.append(
            Block(
                vs,
                _elem(b["target"], field),
                _elem(b["modulus"], field),
                bool(b.get("exceptional", False)),
            )
        )
    return blocks


def problem_from_json(d: dict) -> ApproxProblem:
    field = _field_of(d)
    situation = d.get("situation", "m")
    blocks = _blocks_from_json(d, field)
    members = [v for b in blocks for v in b.S]
    cert = _resolve_cert(d, field, members)
    return ApproxProblem(field, situation, tuple(blocks), cert)


def problem_to_json(p: ApproxProblem) -> dict:
    out: dict = {"field": p.field, "situation": p.situation}
    if p.cert is not None:
        out["certificate"] = cert_to_descriptor(p.cert)
    out["blocks"] = [
        {
            "localities": [descriptor(v) for v in b.S],
            "target": format_element(b.x),
            "modulus": format_element(b.z),
            **({"exceptional": True} if b.exceptional else {}),
        }
        for b in p.blocks
    ]
    return out


def constraints_from_json(d: dict, field: Optional[str] = None) -> list[Constraint]:
    field = field or _field_of(d)
    raw = d.get("constraints")
    if not isinstance(raw, list) or not raw:
        raise BadParams("expected a nonempty 'constraints' list")
    out = []
    for c in raw:
        out.append(
            Constraint(
                locality_from_descriptor(c["locality"]),
                _elem(c["target"], field),
                _elem(c["modulus"], field),
                bool(c.get("strict", True)),
            )
        )
    return out


def constraints_to_json(cs) -> list[dict]:
    return [
        {
            "locality": descriptor(c.v),
            "target": format_element(c.x),
            "modulus": format_element(c.z),
            "strict": c.strict,
        }
        for c in cs
    ]


def pairs_from_json(d: dict, key: str) -> tuple[str, list, Optional[Certificate]]:
    """(field, [(localities, element)], certificate) for value/residue files.

    key names the per-pair element: "modulus" for value approximation,
    "target" for residue approximation.
    """
    field = _field_of(d)
    raw = d.get("pairs")
    if not isinstance(raw, list) or not raw:
        raise BadParams("expected a nonempty 'pairs' list")
    pairs = []
    for p in raw:
        vs = tuple(locality_from_descriptor(loc) for loc in p["localities"])
        pairs.append((vs, _elem(p[key], field)))
    members = [v for vs, _ in pairs for v in vs]
    cert = _resolve_cert(d, field, members)
    if cert is None:
        cert = find_common_certificate(members)
    return field, pairs, cert


def strong_from_json(d: dict) -> tuple[list[Constraint], Locality]:
    field = _field_of(d)
    cs = constraints_from_json(d, field)
    exc = d.get("excluded")
    if exc is None:
        raise BadParams("strong approximation needs an 'excluded' place")
    return cs, locality_from_descriptor(exc)


def map_problem_from_json(d: dict):
    """(field, map, blocks, witness dict, certificate) for func-approx files."""
    field = _field_of(d)
    g = map_from_descriptor(d["map"], field)
    raw = d.get("blocks")
    if not isinstance(raw, list) or not raw:
        raise BadParams("func-approx needs a nonempty 'blocks' list")
    blocks = []
    for b in raw:
        vs = tuple(locality_from_descriptor(loc) for loc in b["localities"])
        blocks.append(
            MapBlock(
                vs,
                tuple(_elem(s, field) for s in b["targets"]),
                tuple(_elem(s, field) for s in b["moduli"]),
            )
        )
    wits = {}
    for w in d.get("witnesses", ()):
        v = locality_from_descriptor(w["locality"])
        wits[v] = tuple(_elem(s, field) for s in w["point"])
    members = [v for b in blocks for v in b.S]
    cert = _resolve_cert(d, field, members)
    return field, g, blocks, wits, cert


def ledger_to_json(entries) -> list[dict]:
    return [
        {
            "locality": descriptor(e.v),
            "target": format_element(e.target),
            "modulus": format_element(e.modulus),
            "strict": e.strict,
            "ok": e.ok,
        }
        for e in entries
    ]


# -- generated corpora -------------------------------------------------------

_Q_PRIMES = (2, 3, 5, 7)
_QT_LINES = (0, 1, 2)
_QI_GAUSS = ((1, 1), (2, 1), (1, 2))

_qi_cert_cache: dict[frozenset, Certificate] = {}


def _rand_q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 9))


def random_weak_constraints(rng: random.Random) -> list[Constraint]:
    """A compatible all-strict constraint set over {2, 3, 5, real}."""
    pool = [p_adic(2), p_adic(3), p_adic(5), real_order()]
    vs = rng.sample(pool, rng.randint(2, 4))
    cs = []
    for v in vs:
        t = q_elem(_rand_q(rng))
        if v.kind == "p-adic":
            z = q_elem(v.data[0] ** rng.randint(1, 3))
        else:
            z = q_elem(Fraction(1, rng.randint(2, 9)))
        cs.append(Constraint(v, t, z))
    return cs


def instance_size(cs) -> int:
    """Height-style measure used to pick oracle-friendly instances."""
    total = 0
    for c in cs:
        for e in (c.x, c.z):
            f = Fraction(e.a)
            total += abs(f.numerator) + f.denominator
    return total


def _q_candidate(rng: random.Random) -> ApproxProblem:
    primes = rng.sample(_Q_PRIMES, rng.randint(1, 3))
    members = [p_adic(p) for p in primes]
    if rng.random() < 0.6:
        members.append(real_order())
    rng.shuffle(members)
    nblocks = rng.randint(1, min(3, len(members)))
    cuts = sorted(rng.sample(range(1, len(members)), nblocks - 1)) if nblocks > 1 else []
    groups, prev = [], 0
    for c in cuts + [len(members)]:
        groups.append(members[prev:c])
        prev = c
    blocks = []
    for g in groups:
        t = q_elem(Fraction(rng.randint(-6, 6)))
        z = q_elem(Fraction(1, rng.randint(2, 5)))
        for v in g:
            if v.kind == "p-adic":
                z = z * q_elem(v.data[0] ** rng.randint(1, 2))
        blocks.append(Block(tuple(g), t, z))
    cert = mixed_cert(Q, tuple(sorted(primes)), 1)
    return ApproxProblem(Q, rng.choice("mo"), tuple(blocks), cert)


def _qt_candidate(rng: random.Random) -> ApproxProblem:
    # three-anchor instances with squared moduli blow through the certified
    # peel's degree growth; keep the corpus at desk scale
    lines = rng.sample(_QT_LINES, rng.choice((1, 1, 2, 2, 3)))
    members = [poly_adic(QPoly((-a, 1))) for a in lines]
    rng.shuffle(members)
    exp_cap = 1 if len(members) == 3 else 2
    blocks = []
    for v in members:
        t = qt_elem(QPoly([rng.randint(-3, 3) for _ in range(rng.randint(1, 2))]))
        z = qt_elem(v.data[0] ** rng.randint(1, exp_cap))
        blocks.append(Block((v,), t, z))
    cert = uniformizer_cert(QT, qt_elem(QPoly((0, 1))), 1)
    return ApproxProblem(QT, rng.choice("mo"), tuple(blocks), cert)


def _qi_candidate(rng: random.Random) -> ApproxProblem:
    gs = rng.sample(_QI_GAUSS, rng.randint(1, 2))
    members = [gauss_prime(g) for g in gs]
    if rng.random() < 0.5:
        members.append(complex_abs())
    blocks = []
    for v in members:
        t = qi_elem(Fraction(rng.randint(-4, 4)), Fraction(rng.randint(-4, 4)))
        if v.kind == "gaussian-prime":
            a, b = v.data[0]
            z = qi_elem(a, b) ** rng.randint(1, 2)
        else:
            z = qi_elem(Fraction(1, rng.randint(2, 5)), 0)
        blocks.append(Block((v,), t, z))
    key = frozenset((v.kind, v.data) for v in members)
    if key not in _qi_cert_cache:
        _qi_cert_cache[key] = find_common_certificate(members)
    return ApproxProblem(QI, rng.choice("mo"), tuple(blocks), _qi_cert_cache[key])


def random_problem(field: str, rng: random.Random) -> ApproxProblem:
    """A compatible block problem drawn from the catalog families."""
    make = {Q: _q_candidate, QI: _qi_candidate, QT: _qt_candidate}.get(field)
    if make is None:
        raise BadParams(f"no generator for field {field!r}")
    for _ in range(64):
        p = make(rng)
        if check_compat(p).ok:
            return p
    raise BadParams("generator failed to find a compatible instance")


def random_strong_instance(rng: random.Random):
    """(constraints, excluded place) with integral targets.

    The excluded place is drawn from the primes not constrained, or the
    real place, so the denominator audit has a clean expected support.
    """
    primes = rng.sample(_Q_PRIMES, rng.randint(2, 3))
    cs = []
    for p in primes:
        k = rng.randint(1, 3)
        cs.append(Constraint(p_adic(p), q_elem(rng.randrange(p**k)), q_elem(p**k)))
    free = [p for p in (2, 3, 5, 7, 11, 13) if p not in primes]
    if rng.random() < 0.25:
        excluded = real_order()
    else:
        excluded = p_adic(rng.choice(free))
    return cs, excluded
