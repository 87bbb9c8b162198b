"""Report pipeline, theorem verification and conjecture probes.

Non-trivial outcomes are tri-state ("holds" / "fails" / "inconclusive" /
"skipped"); failure verdicts always carry a witness that can be re-checked
standalone.
"""

from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

from kasteleyn.families import (
    FamilySpec,
    Partition,
    build_family_graph,
    delannoy_matrix,
    aztec_matrix_closed_form,
    build_aztec_graph,
    build_skew_graph,
    jacobi_trudi,
    family_matrix,
)
from kasteleyn.graphs import (
    GuardExceeded,
    MONO,
    adjacency_matrix,
    enumerate_matchings,
    kasteleyn_orient,
    kasteleyn_percus_sign,
    monogamous_resolution,
)
from kasteleyn.matrices import (
    ExactMatrix,
    NormalFormFailure,
    cokernel_of,
    determinant,
    laurent_smith_attempt,
    pfaffian,
    ring_adapter,
    smith_normal_form,
    stable_invariants,
)
from kasteleyn.rings import (
    DomainError,
    LaurentPoly,
    RationalPoly,
    factor_q_round,
    integer_squarefree,
    smooth_factor,
)


def oracle_guard(default=64):
    env = os.environ.get("KASTELEYN_ORACLE_GUARD")
    if env:
        return int(env)
    return default


RINGS = ("z", "laurent", "qpoly", "z@q0")


# ---------------------------------------------------------------------------
# factor diagnostics


def roundness_of_integer(n, bound):
    out = smooth_factor(n, bound)
    diag = {
        "kind": "smooth",
        "primes": list(out.primes),
        "residual": out.residual,
        "bound": bound,
    }
    return ("holds" if out.success else "fails"), diag


def roundness_of_poly(f, bound):
    """q-roundness of a Laurent factor: cyclotomic-type polynomial part and a
    smooth integer content."""
    qr = factor_q_round(f)
    diag = {
        "kind": "q-round",
        "factors": list(qr.factor_names()),
        "residual": str(qr.residual),
    }
    if qr.success:
        return "holds", diag
    res = qr.residual
    if res.span == 0:
        sm = smooth_factor(res.trailing_coeff(), bound)
        diag["residual_primes"] = list(sm.primes)
        diag["residual_cofactor"] = sm.residual
        return ("holds" if sm.success else "fails"), diag
    return "fails", diag


def squarefree_of_factor(f, ring):
    if ring == "z":
        return "holds" if integer_squarefree(f) else "fails"
    if isinstance(f, LaurentPoly):
        f = RationalPoly.from_laurent(f.normal())
    return "holds" if f.is_squarefree() else "fails"


# ---------------------------------------------------------------------------
# report records


@dataclass
class ReportRecord:
    spec: dict
    ring: str
    matrix_kind: str
    rows: int
    cols: int
    free_rank: int
    invariant_factors: list
    factor_diagnostics: list
    round_verdict: str
    squarefree_verdict: str
    oracle_check: str
    duration: float
    oracle_count: int = None
    notes: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "schema_version": 1,
            "spec": self.spec,
            "ring": self.ring,
            "matrix_kind": self.matrix_kind,
            "rows": self.rows,
            "cols": self.cols,
            "free_rank": self.free_rank,
            "invariant_factors": self.invariant_factors,
            "factor_diagnostics": self.factor_diagnostics,
            "round_verdict": self.round_verdict,
            "squarefree_verdict": self.squarefree_verdict,
            "oracle_check": self.oracle_check,
            "oracle_count": self.oracle_count,
            "duration": self.duration,
            "notes": self.notes,
        }

    CSV_COLUMNS = (
        "variant", "a", "b", "c", "d", "e", "n", "group", "q_mode",
        "wrong_parity", "lam", "mu", "ring", "matrix_kind", "rows", "cols",
        "free_rank", "invariant_factors", "round_verdict",
        "squarefree_verdict", "oracle_check", "oracle_count",
    )

    def to_csv_row(self):
        s = self.spec
        return [
            s.get("variant"), s.get("a"), s.get("b"), s.get("c"), s.get("d"),
            s.get("e"), s.get("n"), s.get("group"), s.get("q_mode"),
            s.get("wrong_parity"),
            " ".join(str(p) for p in s.get("lam", ())),
            " ".join(str(p) for p in s.get("mu", ())),
            self.ring, self.matrix_kind, self.rows,
            self.cols, self.free_rank, ";".join(self.invariant_factors),
            self.round_verdict, self.squarefree_verdict, self.oracle_check,
            self.oracle_count,
        ]


def _bound_for(spec):
    base = spec.a + spec.b + spec.c + abs(spec.d) + abs(spec.e) + spec.n + sum(spec.lam)
    return 2 * max(base, 2) + 1


def family_matrix_for_ring(spec, ring, q0=-1, tree_seed=0):
    """Build the family's matrix in the requested coefficient ring.  The
    tree seed varies the dual spanning tree of the decoration pass; the
    stable invariants are seed-independent (Proposition-style check)."""
    if ring not in RINGS:
        raise DomainError(f"unknown report ring {ring!r}")
    if spec.variant == "delannoy":
        if ring != "z":
            raise DomainError("the Delannoy family is an integer matrix family")
        return delannoy_matrix(spec.n), "M", None
    wants_q = ring in ("laurent", "qpoly", "z@q0")
    spec2 = spec
    if wants_q and spec.q_mode == "none" and spec.variant != "skew-shape" and spec.variant != "aztec":
        spec2 = FamilySpec(**{**spec.to_json(), "q_mode": "cube"})
    if not wants_q and spec.q_mode != "none":
        spec2 = FamilySpec(**{**spec.to_json(), "q_mode": "none"})
    G = build_family_graph(spec2)
    if any(v.kind != MONO for v in G.vertices):
        G = monogamous_resolution(G)
    if spec2.variant == "skew-shape":
        M, kind = adjacency_matrix(G, "bipartite"), "M"
    elif G.is_bipartite_colored():
        M, kind = adjacency_matrix(kasteleyn_percus_sign(G, tree_seed), "bipartite"), "M"
    else:
        M, kind = adjacency_matrix(kasteleyn_orient(G, tree_seed), "alternating"), "A"
    if ring == "z" and M.ring == "laurent":
        M = M.specialize_q(1)
    elif ring == "z@q0":
        if M.ring != "laurent":
            raise DomainError("q-specialization needs a q-weighted family")
        M = M.specialize_q(q0)
    elif ring == "qpoly":
        M = M.to_qpoly()
    elif ring == "laurent" and M.ring != "laurent":
        M = M.map_ring("laurent", LaurentPoly.coerce)
    return M, kind, G


def _oracle_status(spec, M, kind, G, guard):
    """(verdict, brute-force count or None)."""
    if G is None:
        return "skipped", None
    try:
        ms = enumerate_matchings(G, count_guard=guard)
    except GuardExceeded:
        return "skipped", None
    if M.rows != M.cols:
        return ("holds" if ms.count == 0 else "fails"), ms.count
    if M.ring == "z":
        if kind == "M":
            return ("holds" if abs(determinant(M)) == ms.count else "fails"), ms.count
        if M.rows % 2 == 1:
            return ("holds" if ms.count == 0 else "fails"), ms.count
        return ("holds" if abs(pfaffian(M)) == ms.count else "fails"), ms.count
    if M.ring == "laurent":
        det = determinant(M)
        total = ms.total_weight
        if kind == "M":
            return ("holds" if _equal_up_to_unit(det, total) else "fails"), ms.count
        return ("holds" if _equal_up_to_unit(det, total * total) else "fails"), ms.count
    return "skipped", ms.count


def _equal_up_to_unit(f, g):
    f = LaurentPoly.coerce(f)
    g = LaurentPoly.coerce(g)
    if f.is_zero() or g.is_zero():
        return f.is_zero() and g.is_zero()
    return f.normal() == g.normal()


def run_report(spec, ring, q0=-1, guard=None):
    """Build, decorate, normal-form and cross-check one family instance."""
    t0 = time.time()
    guard = oracle_guard() if guard is None else guard
    M, kind, G = family_matrix_for_ring(spec, ring, q0)
    notes = {}
    if ring == "laurent":
        attempt = laurent_smith_attempt(M)
        if not attempt.success:
            return ReportRecord(
                spec.to_json(), ring, kind, M.rows, M.cols, -1, [],
                [], "inconclusive" if attempt.outcome == "inconclusive" else "fails",
                "inconclusive", "skipped", time.time() - t0, None,
                {"normal_form": attempt.outcome,
                 "witness": [str(w) for w in (attempt.witness or ())]},
            )
        inv = stable_invariants(M)
    else:
        inv = stable_invariants(M)
    bound = _bound_for(spec)
    diags = []
    round_v = "holds"
    sqfree_v = "holds"
    for f in inv.factors:
        if inv.ring == "z":
            verdict, diag = roundness_of_integer(f, bound)
        else:
            lf = f if isinstance(f, LaurentPoly) else RationalPoly.coerce(f).primitive_integer_form().to_laurent()
            verdict, diag = roundness_of_poly(lf, bound)
        diags.append(diag)
        if verdict == "fails":
            round_v = "fails"
        sq = squarefree_of_factor(f, "z" if inv.ring == "z" else "laurent")
        if sq == "fails":
            sqfree_v = "fails"
    oracle, count = _oracle_status(spec, M, kind, G, guard)
    return ReportRecord(
        spec.to_json(), ring, kind, M.rows, M.cols, inv.free_rank,
        list(inv.factor_strings()), diags, round_v, sqfree_v, oracle,
        time.time() - t0, count, notes,
    )


# ---------------------------------------------------------------------------
# conjecture suites


@dataclass
class ConjectureVerdict:
    conjecture: str
    instance: dict
    verdict: str                 # holds | fails | inconclusive | skipped
    witness: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "conjecture": self.conjecture,
            "instance": self.instance,
            "verdict": self.verdict,
            "witness": self.witness,
        }


def _ordered_triples(ceiling):
    out = []
    for a in range(1, ceiling + 1):
        for b in range(a, ceiling + 1):
            for c in range(b, ceiling + 1):
                if a + b + c <= ceiling:
                    out.append((a, b, c))
    return out


def _tau_dims(ceiling):
    out = []
    for a in range(1, ceiling + 1):
        for b in range(1, ceiling + 1):
            if a + 2 * b <= ceiling:
                out.append((a, b, b))
    return out


def _partitions_upto(n):
    out = []

    def rec(rest, maxpart, acc):
        if rest == 0:
            if acc:
                out.append(tuple(acc))
            return
        for p in range(min(rest, maxpart), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    for total in range(1, n + 1):
        rec(total, total, [])
    return out


def _round_instances(ceiling):
    """(label, FamilySpec, ring) list for Conjecture c:round."""
    out = []
    for (a, b, c) in _ordered_triples(ceiling):
        out.append((f"M({a},{b},{c};q)",
                    FamilySpec(variant="ppbox", a=a, b=b, c=c, q_mode="cube"),
                    "laurent"))
    for a in range(1, ceiling // 3 + 1):
        out.append((f"M_rho({a},{a},{a};q)",
                    FamilySpec(variant="ppbox-quotient", a=a, b=a, c=a,
                               group="rho", q_mode="cube"), "laurent"))
    for dims in _tau_dims(ceiling):
        a, b, _ = dims
        for mode, tilde in (("cube", ""), ("orbit", "~")):
            out.append((f"{tilde}A_tau({a},{b},{b};q)",
                        FamilySpec(variant="ppbox-quotient", a=a, b=b, c=b,
                                   group="tau", q_mode=mode), "laurent"))
            out.append((f"{tilde}A'_tau({a},{b},{b};q)",
                        FamilySpec(variant="ppbox-impossible", a=a, b=b, c=b,
                                   group="tau", q_mode=mode, wrong_parity=True),
                        "laurent"))
    for a in range(1, ceiling // 3 + 1):
        for mode, tilde in (("orbit", "~"),):
            out.append((f"{tilde}A_tau,rho({a},{a},{a};q)",
                        FamilySpec(variant="ppbox-quotient", a=a, b=a, c=a,
                                   group="tau,rho", q_mode=mode), "laurent"))
            out.append((f"{tilde}A'_tau,rho({a},{a},{a};q)",
                        FamilySpec(variant="ppbox-impossible", a=a, b=a, c=a,
                                   group="tau,rho", q_mode=mode,
                                   wrong_parity=True), "laurent"))
    for lam in _partitions_upto(max(ceiling - 2, 1)):
        for a in range(1, ceiling - sum(lam) + 1):
            out.append((f"M({list(lam)};q_{a})",
                        FamilySpec(variant="skew-shape", a=a, lam=lam),
                        "laurent"))
    # integer-ring list
    for (a, b, c) in _ordered_triples(ceiling):
        for d in (0, 1):
            for e in (-1, 0, 1, 2):
                if e == d or a + b + c + d + abs(e) > ceiling:
                    continue
                out.append((f"M({a},{b},{c},{d},{e})",
                            FamilySpec(variant="hex-minus-triangle",
                                       a=a, b=b, c=c, d=d, e=e), "z"))
        out.append((f"A_kappa({a},{b},{c})",
                    FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c,
                               group="kappa"), "z"))
        out.append((f"A'_kappa({a},{b},{c})",
                    FamilySpec(variant="ppbox-impossible", a=a, b=b, c=c,
                               group="kappa"), "z"))
    for (a, b, _) in _tau_dims(ceiling):
        if (2 * a) + 2 * b <= ceiling:
            out.append((f"M_kappa-tau({2 * a},{b},{b})",
                        FamilySpec(variant="ppbox-quotient", a=2 * a, b=b, c=b,
                                   group="kappa-tau"), "z"))
            out.append((f"A_tau,kappa({2 * a},{b},{b})",
                        FamilySpec(variant="ppbox-quotient", a=2 * a, b=b, c=b,
                                   group="tau,kappa"), "z"))
            out.append((f"A'_tau,kappa({2 * a},{b},{b})",
                        FamilySpec(variant="ppbox-impossible", a=2 * a, b=b, c=b,
                                   group="tau,kappa"), "z"))
    for a in range(1, ceiling // 3 + 1):
        out.append((f"A_rho,kappa({a},{a},{a})",
                    FamilySpec(variant="ppbox-quotient", a=a, b=a, c=a,
                               group="rho,kappa"), "z"))
        if 6 * a <= ceiling:
            out.append((f"M_kappa-tau,rho({2 * a},{2 * a},{2 * a})",
                        FamilySpec(variant="ppbox-quotient", a=2 * a, b=2 * a,
                                   c=2 * a, group="kappa-tau,rho"), "z"))
            out.append((f"A_tau,rho,kappa({2 * a},{2 * a},{2 * a})",
                        FamilySpec(variant="ppbox-quotient", a=2 * a, b=2 * a,
                                   c=2 * a, group="tau,rho,kappa"), "z"))
            out.append((f"A'_tau,rho,kappa({2 * a},{2 * a},{2 * a})",
                        FamilySpec(variant="ppbox-impossible", a=2 * a, b=2 * a,
                                   c=2 * a, group="tau,rho,kappa"), "z"))
    return out


def _sqfree_instances(ceiling):
    out = []
    for (a, b, c) in _ordered_triples(ceiling):
        out.append((f"M({a},{b},{c};q)",
                    FamilySpec(variant="ppbox", a=a, b=b, c=c, q_mode="cube"),
                    "laurent"))
    for a in range(1, ceiling // 3 + 1):
        out.append((f"M_rho({a},{a},{a};q)",
                    FamilySpec(variant="ppbox-quotient", a=a, b=a, c=a,
                               group="rho", q_mode="cube"), "laurent"))
    for dims in _tau_dims(ceiling):
        a, b, _ = dims
        for mode, tilde in (("cube", ""), ("orbit", "~")):
            out.append((f"{tilde}A_tau({a},{b},{b};q)",
                        FamilySpec(variant="ppbox-quotient", a=a, b=b, c=b,
                                   group="tau", q_mode=mode), "laurent"))
    for a in range(1, ceiling // 3 + 1):
        out.append((f"~A_tau,rho({a},{a},{a};q)",
                    FamilySpec(variant="ppbox-quotient", a=a, b=a, c=a,
                               group="tau,rho", q_mode="orbit"), "laurent"))
    return out


def conjecture_suite(which, ceiling=8, guard=None):
    guard = oracle_guard() if guard is None else guard
    if which == "round":
        return _run_round(ceiling, guard)
    if which == "sqfree":
        return _run_sqfree(ceiling, guard)
    if which == "q-minus-one":
        return _run_q_minus_one(ceiling)
    raise DomainError(f"unknown conjecture id {which!r}")


def _run_round(ceiling, guard):
    out = []
    for label, spec, ring in _round_instances(ceiling):
        inst = {"label": label, "spec": spec.to_json(), "ring": ring}
        try:
            rep = run_report(spec, ring, guard=guard)
        except (DomainError, NormalFormFailure) as exc:
            out.append(ConjectureVerdict("round", inst, "skipped",
                                         {"reason": str(exc)}))
            continue
        if rep.round_verdict == "holds":
            out.append(ConjectureVerdict("round", inst, "holds"))
        elif rep.round_verdict == "inconclusive":
            out.append(ConjectureVerdict("round", inst, "inconclusive",
                                         {"notes": rep.notes}))
        else:
            bad = [d for d in rep.factor_diagnostics
                   if d.get("residual") not in (None, "1") or d.get("residual_cofactor", 1) != 1]
            witness = {"factors": rep.invariant_factors, "diagnostics": bad}
            if rep.notes:
                witness["normal_form"] = rep.notes
            out.append(ConjectureVerdict("round", inst, "fails", witness))
    return out


def _run_sqfree(ceiling, guard):
    out = []
    for label, spec, ring in _sqfree_instances(ceiling):
        inst = {"label": label, "spec": spec.to_json(), "ring": ring}
        try:
            rep = run_report(spec, ring, guard=guard)
        except (DomainError, NormalFormFailure) as exc:
            out.append(ConjectureVerdict("sqfree", inst, "skipped",
                                         {"reason": str(exc)}))
            continue
        if rep.squarefree_verdict == "holds":
            out.append(ConjectureVerdict("sqfree", inst, "holds"))
        elif rep.squarefree_verdict == "inconclusive":
            out.append(ConjectureVerdict("sqfree", inst, "inconclusive",
                                         {"notes": rep.notes}))
        else:
            out.append(ConjectureVerdict("sqfree", inst, "fails",
                                         {"factors": rep.invariant_factors}))
    return out


def _invariant_summary(M):
    inv = stable_invariants(M)
    return inv.free_rank, sorted(inv.factor_strings())


def _doubled(summary):
    free, factors = summary
    doubled = sorted(list(factors) + list(factors))
    return 2 * free, doubled


def _squared_entrywise(summary):
    free, factors = summary
    # integer factors as strings; square them numerically
    return free, sorted(str(int(f) * int(f)) for f in factors)


def _try_matrix(spec, ring, q0=-1):
    M, kind, _ = family_matrix_for_ring(spec, ring, q0)
    return M


def _run_q_minus_one(ceiling):
    out = []
    # identity 1: Sm(A_{<G,kappa>}(a,b,c)) = Sm(M_G(a,b,c)_{-1})^2
    for g, gk in (("1", "kappa"), ("rho", "rho,kappa")):
        for (a, b, c) in _ordered_triples(ceiling):
            if g == "rho" and not a == b == c:
                continue
            inst = {"identity": 1, "G": g, "G'": gk, "a": a, "b": b, "c": c}
            try:
                if g == "1":
                    lhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c, group=gk)
                    rhs_spec = FamilySpec(variant="ppbox", a=a, b=b, c=c, q_mode="cube")
                else:
                    lhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c, group=gk)
                    rhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c,
                                          group="rho", q_mode="cube")
                lhs = _invariant_summary(_try_matrix(lhs_spec, "z"))
                rhs = _invariant_summary(_try_matrix(rhs_spec, "z@q0", q0=-1))
            except (DomainError, NormalFormFailure) as exc:
                out.append(ConjectureVerdict("q-minus-one", inst, "skipped",
                                             {"reason": str(exc)}))
                continue
            # primary verdict: multiplicity doubling; the entrywise-squared
            # comparison is printed alongside so the reading can be audited
            # (small instances split between the two by parity class)
            verdict = "holds" if lhs == _doubled(rhs) else "fails"
            witness = {
                "lhs": {"free_rank": lhs[0], "factors": lhs[1]},
                "rhs": {"free_rank": rhs[0], "factors": rhs[1]},
                "rhs_doubled": {"free_rank": _doubled(rhs)[0], "factors": _doubled(rhs)[1]},
                "rhs_squared_entrywise": {"free_rank": rhs[0],
                                          "factors": _squared_entrywise(rhs)[1]},
                "entrywise_holds": lhs == _squared_entrywise(rhs),
            }
            out.append(ConjectureVerdict("q-minus-one", inst, verdict, witness))
    # identity 2: coker A_G(a,b,c)_{-1} = coker M_{G'}(a,b,c) ^ (+)2
    for g, gp in (("tau", "kappa-tau"), ("tau,rho", "kappa-tau,rho")):
        for (a, b, c) in _ordered_triples(ceiling):
            if b != c:
                continue
            if g == "tau,rho" and not a == b == c:
                continue
            inst = {"identity": 2, "G": g, "G'": gp, "a": a, "b": b, "c": c}
            try:
                lhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c,
                                      group=g, q_mode="cube")
                rhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c, group=gp)
                lhs = _invariant_summary(_try_matrix(lhs_spec, "z@q0", q0=-1))
                rhs = _invariant_summary(_try_matrix(rhs_spec, "z"))
            except (DomainError, NormalFormFailure) as exc:
                out.append(ConjectureVerdict("q-minus-one", inst, "skipped",
                                             {"reason": str(exc)}))
                continue
            verdict = "holds" if lhs == _doubled(rhs) else "fails"
            witness = {
                "lhs": {"free_rank": lhs[0], "factors": lhs[1]},
                "rhs": {"free_rank": rhs[0], "factors": rhs[1]},
                "rhs_doubled": {"free_rank": _doubled(rhs)[0], "factors": _doubled(rhs)[1]},
            }
            out.append(ConjectureVerdict("q-minus-one", inst, verdict, witness))
    # identity 3: coker A_{<G,kappa>}(a,b,c) = coker A'_G(a,b,c)_{-1}
    for g, gk in (("tau", "tau,kappa"), ("tau,rho", "tau,rho,kappa")):
        for (a, b, c) in _ordered_triples(ceiling):
            if b != c:
                continue
            if g == "tau,rho" and not a == b == c:
                continue
            inst = {"identity": 3, "G": g, "G'": gk, "a": a, "b": b, "c": c}
            try:
                lhs_spec = FamilySpec(variant="ppbox-quotient", a=a, b=b, c=c, group=gk)
                rhs_spec = FamilySpec(variant="ppbox-impossible", a=a, b=b, c=c,
                                      group=g, q_mode="cube", wrong_parity=True)
                lhs = _invariant_summary(_try_matrix(lhs_spec, "z"))
                rhs = _invariant_summary(_try_matrix(rhs_spec, "z@q0", q0=-1))
            except (DomainError, NormalFormFailure) as exc:
                out.append(ConjectureVerdict("q-minus-one", inst, "skipped",
                                             {"reason": str(exc)}))
                continue
            verdict = "holds" if lhs == rhs else "fails"
            witness = {
                "lhs": {"free_rank": lhs[0], "factors": lhs[1]},
                "rhs": {"free_rank": rhs[0], "factors": rhs[1]},
            }
            out.append(ConjectureVerdict("q-minus-one", inst, verdict, witness))
    return out


# ---------------------------------------------------------------------------
# theorem verification


def _mu_candidates(lam, max_size=2):
    lam = Partition(lam)
    cands = {()}
    for m1 in range(0, min(lam[0], max_size) + 1):
        if m1 == 0:
            continue
        cands.add((m1,))
        for m2 in range(1, min(lam[1], m1, max_size - m1) + 1):
            if m1 + m2 <= max_size:
                cands.add((m1, m2))
    return sorted(cands)


def verify_theorems(which, ceiling=6, guard=None):
    """Returns (summary dict, failures list)."""
    guard = oracle_guard() if guard is None else guard
    if which == "jt":
        return _verify_jt(ceiling)
    if which == "aztec":
        return _verify_aztec(ceiling, guard)
    raise DomainError(f"unknown theorem id {which!r}")


def _partitions_of_at_most(n):
    out = []

    def rec(rest, maxpart, acc):
        if acc:
            out.append(tuple(acc))
        if rest == 0:
            return
        for p in range(min(rest, maxpart), 0, -1):
            acc.append(p)
            rec(rest - p, p, acc)
            acc.pop()

    rec(n, n, [])
    return sorted(set(out), key=lambda t: (sum(t), t))


def _verify_jt(ceiling, max_a=4, max_mu=2):
    checked = 0
    failures = []
    for lam in _partitions_of_at_most(ceiling):
        for mu in _mu_candidates(lam, max_mu):
            if not Partition(lam).contains(Partition(mu)):
                continue
            for a in range(1, max_a + 1):
                checked += 1
                inst = {"lam": list(lam), "mu": list(mu), "a": a}
                J = jacobi_trudi(lam, mu, a)
                D = jacobi_trudi(lam, mu, a, dual=True)
                Z = build_skew_graph(Partition(lam), Partition(mu), a)
                M = adjacency_matrix(Z, "bipartite")
                invs = []
                dets = []
                for X in (J, D, M):
                    if X.rows == 0:
                        invs.append((0, ()))
                        dets.append(LaurentPoly.one())
                        continue
                    inv = stable_invariants(X.to_qpoly())
                    invs.append((inv.free_rank, inv.factor_strings()))
                    dets.append(LaurentPoly.coerce(determinant(X)))
                if not (invs[0] == invs[1] == invs[2]):
                    failures.append({**inst, "kind": "invariants",
                                     "J": invs[0], "D": invs[1], "M": invs[2]})
                d0 = dets[0]
                for d in dets[1:]:
                    if not _equal_up_to_unit(d0, d):
                        failures.append({**inst, "kind": "determinant",
                                         "values": [str(x) for x in dets]})
                        break
    return {"which": "jt", "checked": checked, "failed": len(failures)}, failures


def _verify_aztec(max_n, guard, geometric_max=5, count_max=4):
    checked = 0
    failures = []
    for n in range(1, max_n + 1):
        checked += 1
        expect = tuple(2 ** k for k in range(1, n + 1))
        M = aztec_matrix_closed_form(n)
        inv = stable_invariants(M)
        if inv.factors != expect or inv.free_rank != 0:
            failures.append({"n": n, "kind": "closed-form",
                             "got": list(inv.factor_strings())})
        if abs(determinant(M)) != 2 ** (n * (n + 1) // 2):
            failures.append({"n": n, "kind": "determinant"})
        if n <= geometric_max:
            Z = build_aztec_graph(n)
            Mg = adjacency_matrix(kasteleyn_percus_sign(Z), "bipartite")
            invg = stable_invariants(Mg)
            if invg.factors != expect or invg.free_rank != 0:
                failures.append({"n": n, "kind": "geometric",
                                 "got": list(invg.factor_strings())})
        if n <= count_max:
            Z = build_aztec_graph(n)
            if enumerate_matchings(Z, count_guard=max(guard, 2 * n * (n + 1))).count != 2 ** (n * (n + 1) // 2):
                failures.append({"n": n, "kind": "count"})
    return {"which": "aztec", "checked": checked, "failed": len(failures)}, failures
