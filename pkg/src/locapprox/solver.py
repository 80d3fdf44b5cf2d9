"""Block approximation: the full pipeline from constraints to verified elements.

A problem asks for one element x meeting a ball condition per block of
localities: x - x_i in z_i*B_v for every v in the i-th block, where B_v is
the maximal ideal m_v (situation "m") or the ring O_v (situation "o").

The solver follows a strict division of labour:

  * check_compat performs every necessary-condition test (moduli equality and
    target closeness at all common coarsenings, independence scaled by the
    certificate's t, pairwise incomparability in situation "m", certificate
    applicability) and reports violations with an explicit witness.
  * finitary_approx handles finitely many single-locality constraints with no
    certificate, by pruning comparable constraints, collapsing dependent
    clusters through their common coarsening's residue field, and finishing
    with weak approximation.
  * block_approx peels blocks one at a time.  Each peel solves the remaining
    blocks with moduli shrunk by t, then rejoins via a b-element whose
    combinator fold is large on the peeled block and small elsewhere.
    Blocks marked exceptional (their members only satisfy the weakened
    certificate conditions) are solved by finitary_approx first and rejoined
    through star links.
  * verify_solution re-checks every membership from scratch; solvers never
    return an element whose ledger has a false entry.

Everything is exact; no floats, no tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .certificates import Certificate, verify_certificate
from .combinator import combine, selector
from .elements import Q, FieldElem, format_element, one, q_elem
from .errors import (
    BadParams,
    CertificateInvalid,
    ExcludedConflict,
    Incompatible,
    IncompatibleInputs,
    NotTIndependent,
    SolverFailed,
    TargetNotIntegral,
    TrivialLocality,
    UnsupportedResidue,
    ZeroModulus,
)
from .intmath import factorint
from .linking import build_b, link_star
from .localities import (
    ORDERING_KINDS,
    Locality,
    cmp_val,
    coarsening_chain,
    contains,
    describe,
    in_max_ideal,
    induced_locality,
    join,
    rat_val,
    refines,
    residue_lift,
    residue_reduce,
    scale_independent,
    strongly_incomparable,
)
from .weak import weak_approx


def _is_ordering(v: Locality) -> bool:
    return v.kind in ORDERING_KINDS


# -- problem data ------------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    """One ball condition: x - target in modulus*B_v, strict meaning B = m."""

    v: Locality
    x: FieldElem
    z: FieldElem
    strict: bool = True

    def __post_init__(self):
        if self.z.is_zero():
            raise ZeroModulus("constraint modulus must be nonzero")
        if self.v.field != self.x.field or self.x.field != self.z.field:
            raise BadParams("constraint mixes fields")


@dataclass(frozen=True)
class Block:
    """A set of localities sharing one target and one modulus."""

    S: tuple[Locality, ...]
    x: FieldElem
    z: FieldElem
    exceptional: bool = False

    def __post_init__(self):
        object.__setattr__(self, "S", tuple(self.S))
        if not self.S:
            raise BadParams("a block needs at least one locality")
        if self.z.is_zero():
            raise ZeroModulus("block modulus must be nonzero")
        fields = {v.field for v in self.S} | {self.x.field, self.z.field}
        if len(fields) != 1:
            raise BadParams("block mixes fields")
        if len(set(self.S)) != len(self.S):
            raise BadParams("a block may not repeat a locality")
        for v in self.S:
            if v.is_trivial:
                raise TrivialLocality("the trivial locality constrains nothing")


@dataclass(frozen=True)
class ApproxProblem:
    field: str
    situation: str
    blocks: tuple[Block, ...]
    cert: Certificate | None = None

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if self.situation not in ("m", "o"):
            raise BadParams("situation must be 'm' or 'o'")
        if not self.blocks:
            raise BadParams("a problem needs at least one block")
        for b in self.blocks:
            if b.x.field != self.field:
                raise BadParams("block field does not match the problem field")
        if self.cert is not None and self.cert.field != self.field:
            raise BadParams("certificate field does not match the problem field")

    @property
    def t(self) -> FieldElem:
        return self.cert.t if self.cert is not None else one(self.field)


@dataclass(frozen=True)
class LedgerEntry:
    v: Locality
    target: FieldElem
    modulus: FieldElem
    strict: bool
    ok: bool


@dataclass(frozen=True)
class Solution:
    x: FieldElem
    ledger: tuple[LedgerEntry, ...]

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.ledger)


# -- verification ------------------------------------------------------------


def _member_ok(v: Locality, x: FieldElem, target: FieldElem, z: FieldElem, strict: bool) -> bool:
    d = (x - target) / z
    return in_max_ideal(v, d) if strict else contains(v, d)


def verify_solution(p: ApproxProblem, x: FieldElem) -> tuple[LedgerEntry, ...]:
    """Independent membership audit of a candidate, one entry per locality."""
    if x.field != p.field:
        raise BadParams("candidate from the wrong field")
    strict = p.situation == "m"
    out = []
    for b in p.blocks:
        for v in b.S:
            out.append(LedgerEntry(v, b.x, b.z, strict, _member_ok(v, x, b.x, b.z, strict)))
    return tuple(out)


def _verify_constraints(cs, x: FieldElem) -> tuple[LedgerEntry, ...]:
    return tuple(
        LedgerEntry(c.v, c.x, c.z, c.strict, _member_ok(c.v, x, c.x, c.z, c.strict))
        for c in cs
    )


def _sealed(cs, x: FieldElem) -> Solution:
    ledger = _verify_constraints(cs, x)
    if not all(e.ok for e in ledger):
        bad = next(e for e in ledger if not e.ok)
        raise SolverFailed(f"constructed element misses the ball at {describe(bad.v)}")
    return Solution(x, ledger)


# -- compatibility checking --------------------------------------------------


@dataclass(frozen=True)
class CompatIssue:
    kind: str  # moduli | targets | independence | comparable | certificate
    detail: str
    witness: Locality | None = None


@dataclass(frozen=True)
class CompatReport:
    ok: bool
    issues: tuple[CompatIssue, ...]


def _val_str(w: Locality, x: FieldElem) -> str:
    if w.kind in ("p-adic", "gaussian-prime", "poly-adic", "degree"):
        from .localities import disc_val

        return str(disc_val(w, x))
    return format_element(x)


def _pair_issues(vi, vj, xi, xj, zi, zj, label: str):
    """Condition (I) for one cross pair, swept over every nontrivial common
    coarsening; comparing at the join alone would miss rank-two members."""
    issues = []
    w0 = vi if vi == vj else join(vi, vj)
    for w in coarsening_chain(w0):
        if w.is_trivial:
            continue
        if cmp_val(w, zi, zj) != "eq":
            issues.append(
                CompatIssue(
                    "moduli",
                    f"moduli differ at {describe(w)} for {label}: "
                    f"w(z_i) = {_val_str(w, zi)} vs w(z_j) = {_val_str(w, zj)}",
                    w,
                )
            )
            continue
        if xi != xj and not contains(w, (xi - xj) / zi):
            issues.append(
                CompatIssue(
                    "targets",
                    f"targets too far apart at {describe(w)} for {label}: "
                    "w(x_i - x_j) < w(z_i)",
                    w,
                )
            )
    return issues


def check_compat(p: ApproxProblem) -> CompatReport:
    """Necessary-condition report for a block problem.

    Report-valued; callers decide whether a violation is fatal.  All pairs
    are swept deterministically and every violation is collected, so the
    first issue names the earliest witnessing coarsening.
    """
    issues: list[CompatIssue] = []
    t = p.t
    strict = p.situation == "m"

    for i, bi in enumerate(p.blocks):
        for bj in p.blocks[i + 1 :]:
            for vi in bi.S:
                for vj in bj.S:
                    label = f"{describe(vi)} / {describe(vj)}"
                    issues.extend(_pair_issues(vi, vj, bi.x, bj.x, bi.z, bj.z, label))
                    if vi == vj:
                        if strict:
                            issues.append(
                                CompatIssue(
                                    "comparable",
                                    f"locality {describe(vi)} repeats across blocks "
                                    "in situation m",
                                    vi,
                                )
                            )
                        continue
                    if not scale_independent(vi, vj, t):
                        issues.append(
                            CompatIssue(
                                "independence",
                                f"blocks are not t-independent at {label}",
                                join(vi, vj),
                            )
                        )
                    if strict and (refines(vi, vj) or refines(vj, vi)):
                        issues.append(
                            CompatIssue(
                                "comparable",
                                f"comparable pair {label} in situation m",
                                join(vi, vj),
                            )
                        )

    certified = [v for b in p.blocks if not b.exceptional for v in b.S]
    exceptional = [v for b in p.blocks if b.exceptional for v in b.S]
    if p.cert is None:
        if certified:
            issues.append(
                CompatIssue(
                    "certificate",
                    "a certificate is required unless every block is exceptional",
                )
            )
    else:
        for group, mode in ((certified, "full"), (exceptional, "exceptional")):
            if not group:
                continue
            report = verify_certificate(p.cert, group, mode=mode)
            for e in report.entries:
                if e.verdict == "failed":
                    issues.append(
                        CompatIssue(
                            "certificate",
                            f"certificate fails at {describe(e.locality)}: {e.detail}",
                            e.locality,
                        )
                    )
    return CompatReport(not issues, tuple(issues))


_ISSUE_ERROR = {"independence": NotTIndependent, "certificate": CertificateInvalid}


def _raise_compat(report: CompatReport):
    first = report.issues[0]
    raise _ISSUE_ERROR.get(first.kind, Incompatible)(first.detail)


# -- finitary approximation (no certificate) ---------------------------------


def _finer_modulus(v: Locality, z1: FieldElem, z2: FieldElem) -> FieldElem:
    if v.is_valuation:
        return z1 if cmp_val(v, z1, z2) != "lt" else z2
    return z1 if contains(v, z1 / z2) else z2


def _finitary_hypotheses(cs, strict: bool):
    n = len(cs)
    for i in range(n):
        for j in range(i + 1, n):
            a, b = cs[i], cs[j]
            label = f"{describe(a.v)} / {describe(b.v)}"
            bad = _pair_issues(a.v, b.v, a.x, b.x, a.z, b.z, label)
            if bad:
                raise IncompatibleInputs(bad[0].detail)
            if a.x != b.x:
                needed = strict or (_is_ordering(a.v) and _is_ordering(b.v))
                if needed and not strongly_incomparable(a.v, b.v):
                    raise IncompatibleInputs(
                        f"{label} must be strongly incomparable to carry "
                        "different targets"
                    )


def _prune_comparable(cs, strict: bool):
    """Drop constraints implied by finer ones (situation o) and collapse
    repeated localities (situation m, equal targets guaranteed)."""
    if not strict:
        kept = []
        for j, c in enumerate(cs):
            covered = any(
                refines(d.v, c.v) and (d.v != c.v or i < j)
                for i, d in enumerate(cs)
                if i != j
            )
            if not covered:
                kept.append(c)
        return kept
    by_loc: dict[Locality, Constraint] = {}
    order = []
    for c in cs:
        prev = by_loc.get(c.v)
        if prev is None:
            by_loc[c.v] = c
            order.append(c.v)
        else:
            by_loc[c.v] = replace(prev, z=_finer_modulus(c.v, prev.z, c.z))
    return [by_loc[v] for v in order]


def _clusters(cs):
    """Transitive closure of "join is nontrivial" over constraint indices."""
    n = len(cs)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if not join(cs[i].v, cs[j].v).is_trivial:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return [g for g in groups.values()]


def _set_join(vs):
    w = vs[0]
    for v in vs[1:]:
        w = join(w, v)
    return w


def _cluster_collapse(group, situation: str) -> Constraint:
    """Solve one dependent cluster through the residue field of its common
    coarsening and return the single replacement constraint at it."""
    w = _set_join([c.v for c in group])
    if w.is_trivial or not w.is_valuation:
        raise SolverFailed("dependent cluster without a valuation coarsening")

    ref = next((c for c in group if c.v == w), group[0])
    if any(c.v == w for c in group):
        # the coarsening itself carries a constraint; all targets in the
        # cluster coincide then, so its own target solves the cluster
        xc = ref.x
    else:
        residue_cs = []
        seen: dict[Locality, Constraint] = {}
        for c in group:
            xb = residue_reduce(w, (c.x - ref.x) / ref.z)
            zb = residue_reduce(w, c.z / ref.z)
            vb = induced_locality(c.v, w)
            prev = seen.get(vb)
            if prev is None:
                seen[vb] = Constraint(vb, xb, zb, c.strict)
                residue_cs.append(vb)
            else:
                seen[vb] = replace(prev, z=_finer_modulus(vb, prev.z, zb))
        sol = finitary_approx([seen[vb] for vb in residue_cs], situation)
        xc = ref.x + ref.z * residue_lift(w, sol.x)

    for c in group:
        if not _member_ok(c.v, xc, c.x, c.z, c.strict):
            raise SolverFailed(f"cluster solution misses the ball at {describe(c.v)}")
    return Constraint(w, xc, ref.z, True)


def finitary_approx(cs, situation: str) -> Solution:
    """Simultaneous approximation at finitely many localities, certificate-free.

    The ball kind comes from the situation: every constraint is strict in
    situation "m" and weak in situation "o" (per-constraint flags are
    overridden).  Hypotheses: at every nontrivial common coarsening w of two
    constraint localities the moduli generate the same w-module and the
    targets differ by at most it; constraints with different targets must sit
    at strongly incomparable localities (in situation "o" only when both are
    orderings).
    """
    if situation not in ("m", "o"):
        raise BadParams("situation must be 'm' or 'o'")
    cs = [replace(c, strict=situation == "m") for c in cs]
    if not cs:
        raise BadParams("nothing to approximate")
    if len({c.v.field for c in cs}) != 1:
        raise BadParams("constraints mix fields")
    for c in cs:
        if c.v.is_trivial:
            raise TrivialLocality("the trivial locality constrains nothing")

    strict = situation == "m"
    _finitary_hypotheses(cs, strict)
    work = _prune_comparable(cs, strict)

    resolved = []
    for group_idx in _clusters(work):
        group = [work[i] for i in group_idx]
        if len(group) == 1:
            resolved.append(group[0])
        else:
            resolved.append(_cluster_collapse(group, situation))

    if len(resolved) == 1:
        return _sealed(cs, resolved[0].x)
    x = weak_approx([(c.v, c.x, c.z, c.strict) for c in resolved])
    return _sealed(cs, x)


# -- block approximation -----------------------------------------------------


def _dedup_blocks(blocks):
    """Situation o: a locality repeated across blocks carries consistent data
    (checked), so later copies are redundant."""
    seen: set[Locality] = set()
    out = []
    for b in blocks:
        fresh = tuple(v for v in b.S if v not in seen)
        seen.update(fresh)
        if fresh:
            out.append(replace(b, S=fresh))
    return out


def _peel(blocks, cert: Certificate, situation: str) -> FieldElem:
    """The induction: solve blocks 2..n at moduli t*z, then rejoin block 1."""
    t = cert.t
    first = blocks[0]
    if len(blocks) == 1:
        return first.x
    rest = [replace(b, z=t * b.z) for b in blocks[1:]]
    xpp = _peel(rest, cert, situation)
    d = first.x - xpp
    if d.is_zero():
        return xpp
    zhat1 = first.z / d
    bs = []
    for b in blocks[1:]:
        bs.append(build_b(first.S, b.S, zhat1, t * b.z / d, cert, situation))
    xhat = selector(cert, combine(cert, bs))
    return xpp + d * xhat


def _strip_covered_exceptional(blocks):
    """Situation o: an exceptional member equal to or coarsening a certified
    member is implied by it and may be dropped."""
    certified_members = [v for b in blocks if not b.exceptional for v in b.S]
    out = []
    for b in blocks:
        if not b.exceptional:
            out.append(b)
            continue
        fresh = tuple(
            v for v in b.S if not any(refines(u, v) for u in certified_members)
        )
        if fresh:
            out.append(replace(b, S=fresh))
    return out


def _exceptional_links(certified, exceptional, d, cert, situation):
    """One star link per certified member: small in every exceptional ball,
    large at its own locality."""
    t = cert.t
    strict = situation == "m"
    sat: list[tuple[Locality, FieldElem]] = []
    seen: set[Locality] = set()
    for b in exceptional:
        zj = t * b.z / d
        for v in b.S:
            if v in seen:
                continue
            seen.add(v)
            zv = _finer_modulus(v, t, t * zj)
            sat.append((v, zv))
    bs = []
    for b in certified:
        zi = t * b.z / d
        for vp in b.S:
            zvp = _finer_modulus(vp, t, t * zi)
            bs.append(link_star(vp, sat, zvp.inv(), variant=1 if strict else 2))
    return bs


def block_approx(p: ApproxProblem) -> Solution:
    """Simultaneous approximation, one ball per block of localities."""
    report = check_compat(p)
    if not report.ok:
        _raise_compat(report)

    blocks = list(p.blocks)
    if p.situation == "o":
        blocks = _strip_covered_exceptional(blocks)
        blocks = _dedup_blocks(blocks)

    certified = [b for b in blocks if not b.exceptional]
    exceptional = [b for b in blocks if b.exceptional]
    strict = p.situation == "m"

    if not certified:
        cs = [
            Constraint(v, b.x, b.z, strict) for b in exceptional for v in b.S
        ]
        sol = finitary_approx(cs, p.situation)
        return Solution(sol.x, verify_solution(p, sol.x))

    cert = p.cert
    if not exceptional:
        x = _peel(certified, cert, p.situation)
    else:
        t = cert.t
        fin_cs = [
            Constraint(v, b.x, t * b.z, strict) for b in exceptional for v in b.S
        ]
        xp = finitary_approx(fin_cs, p.situation).x
        xpp = _peel([replace(b, z=t * b.z) for b in certified], cert, p.situation)
        if xp == xpp:
            x = xp
        else:
            d = xp - xpp
            bs = _exceptional_links(certified, exceptional, d, cert, p.situation)
            xhat = selector(cert, combine(cert, bs))
            x = xpp + d * xhat

    ledger = verify_solution(p, x)
    if not all(e.ok for e in ledger):
        bad = next(e for e in ledger if not e.ok)
        raise SolverFailed(f"constructed element misses the ball at {describe(bad.v)}")
    return Solution(x, ledger)


# -- corollaries -------------------------------------------------------------


def weak_solve(cs) -> Solution:
    """Constraint-level front end for weak approximation, with a ledger."""
    x = weak_approx([(c.v, c.x, c.z, c.strict) for c in cs])
    return _sealed(cs, x)


def value_approx(pairs, cert: Certificate) -> FieldElem:
    """Element whose value agrees exactly with z_i at every v in S_i.

    pairs: sequence of (localities, modulus).  Valuation-kind localities
    only; delegates to block approximation in situation "m" with the moduli
    as their own targets, so x/z_i and z_i/x are both units everywhere.
    """
    blocks = []
    for S, z in pairs:
        for v in S:
            if not v.is_valuation:
                raise BadParams("value approximation needs valuations")
        blocks.append(Block(tuple(S), z, z))
    if not blocks:
        raise BadParams("nothing to approximate")
    p = ApproxProblem(blocks[0].x.field, "m", tuple(blocks), cert)
    x = block_approx(p).x
    for S, z in pairs:
        for v in S:
            if not (contains(v, x / z) and contains(v, z / x)):
                raise SolverFailed(f"value mismatch at {describe(v)}")
    return x


def residue_approx(pairs, cert: Certificate) -> FieldElem:
    """Integral element with the prescribed residue at every v in S_i.

    pairs: sequence of (localities, target).  Targets must already be
    integral at their localities; the result differs from each target by a
    maximal-ideal element, which is residue equality wherever a residue
    field is represented.
    """
    blocks = []
    for S, x in pairs:
        for v in S:
            if not contains(v, x):
                raise TargetNotIntegral(
                    f"target {format_element(x)} is not integral at {describe(v)}"
                )
        blocks.append(Block(tuple(S), x, one(x.field)))
    if not blocks:
        raise BadParams("nothing to approximate")
    p = ApproxProblem(blocks[0].x.field, "m", tuple(blocks), cert)
    x = block_approx(p).x
    for S, xi in pairs:
        for v in S:
            if v.is_valuation and not v.is_trivial:
                try:
                    same = residue_reduce(v, x) == residue_reduce(v, xi)
                except UnsupportedResidue:
                    continue
                if not same:
                    raise SolverFailed(f"residue mismatch at {describe(v)}")
    return x


def strong_approx_q(cs, excluded: Locality) -> FieldElem:
    """Weak approximation over the rationals that stays integral at every
    unconstrained place except the excluded one.

    The denominator of the result is supported at the excluded prime and at
    constrained primes whose own ball forces a pole; with integral targets it
    is a pure power of the excluded prime.
    """
    if excluded.field != Q or excluded.kind not in ("p-adic", "real"):
        raise BadParams("the excluded place must be a rational prime or the real place")
    pole_primes: set[int] = set()
    for c in cs:
        if c.v.field != Q:
            raise BadParams("strong approximation here is over the rationals")
        if c.v == excluded:
            raise ExcludedConflict(f"{describe(excluded)} is itself constrained")
        if c.v.kind == "p-adic":
            p = c.v.data[0]
            if c.x.a and rat_val(c.x.a, p) < 0:
                pole_primes.add(p)
    if not cs:
        return q_elem(0)

    aux = excluded.data[0] if excluded.kind == "p-adic" else None
    has_real = any(c.v.kind == "real" for c in cs)
    x = weak_approx(
        [(c.v, c.x, c.z, c.strict) for c in cs],
        aux_prime=aux if has_real else None,
    )

    allowed = set(pole_primes)
    if excluded.kind == "p-adic":
        allowed.add(excluded.data[0])
    for prime in factorint(x.a.denominator):
        if prime not in allowed:
            raise SolverFailed(
                f"denominator support leaked to the unconstrained prime {prime}"
            )
    return x
