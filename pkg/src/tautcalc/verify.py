"""Named check suites shared by the command line and the acceptance tests.

Each suite returns a list of :class:`Check`.  A check with status "note"
records a known difference between a stated closed form and the computed
value that has been shown not to matter; it never counts as a failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import applications as app
from . import degeneracy as dg
from . import divisors as dv
from . import exactnum as ex


@dataclass(frozen=True)
class Check:
    name: str
    expected: object
    computed: object
    status: str  # pass, fail or note
    provenance: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "fail"


def check(name, expected, computed, provenance="", note_on_mismatch=False) -> Check:
    if expected == computed:
        status = "pass"
    else:
        status = "note" if note_on_mismatch else "fail"
    return Check(name, expected, computed, status, provenance)


def all_ok(checks) -> bool:
    return all(c.ok for c in checks)


def identities(power_r_max=50, sigma_r_max=40, final_r_max=40, catalan_degree=100) -> list[Check]:
    out = []
    for p in (1, 2, 3):
        bad = [r for r in range(1, power_r_max + 1) if not ex.check_identity_power_sum(r, p)]
        out.append(check(f"power-sum identity, power {p}, r=1..{power_r_max}", [], bad,
                         "sum_i i^p C(2i-1,i)(r-i+1)C(2r-2i+1,r-i) closed forms"))
    bad = [r for r in range(3, sigma_r_max + 1) if not ex.check_master_identity_sigma(r)]
    out.append(check(f"sigma identity, r=3..{sigma_r_max}", [], bad, "2 sum i w_i P(r,i) closed form"))
    bad = [r for r in range(1, final_r_max + 1) if not ex.check_final_identity(r)]
    out.append(check(f"final identity, r=1..{final_r_max}", [], bad,
                     "sum (4i^3 - 2i^2(r+1)) w_i = (r-1)r(r+1)(r+2)/16 2^{2r-1}"))
    out.append(check(f"Catalan series to degree {catalan_degree}", True,
                     ex.check_catalan_series(catalan_degree), "(1-sqrt(1-4x))/(2x)"))
    return out


def mu_nu_suite(r_max=12) -> list[Check]:
    out = []
    for r in range(3, r_max + 1):
        mu, nu = dv.mu_nu(r)
        g = dv.prym_genus(r)
        out.append(check(f"mu = nu, r={r}", mu, nu, "pointed class mu BN + nu W"))
        out.append(check(f"Sigma = (g+1)(g-3)/(g(g-1)) n, r={r}",
                         Fraction((g + 1) * (g - 3), g * (g - 1)) * dv.castelnuovo_n(r), dv.sigma_sum(r),
                         "sigma double sum"))
    return out


def ring_crosscheck(rs=(2, 3, 4), extra_m=7) -> list[Check]:
    """Engine ch_0..ch_3, c_2, c_3 of M_i against the closed forms.

    The stated c_2 (i >= 2) and c_3 (i >= 1) differ from the engine; those
    mismatches are recorded as notes, and the corrected forms, the
    annihilation of the difference and an exp-log recomputation are checked.
    """
    out = []
    for r in rs:
        base = dg.DegeneracyProblem(r)
        for prob in (base, dg.DegeneracyProblem(r, base.m + extra_m)):
            for i in range(r + 1):
                tag = f"r={r} m={prob.m} i={i}"
                ch = dg.chern_character_Mi(i, prob)
                ref = dg.reference_chern_character(i, prob)
                out.append(check(f"ch_0 {tag}", ref[0].constant(), ch.rank_part, "GRR rank"))
                for k in (1, 2, 3):
                    out.append(check(f"ch_{k} {tag}", ref[k].debug_lines(), ch[k].debug_lines(), "GRR"))
                c = dg.chern_classes_Mi(i, prob)
                stated = dg.reference_chern_classes(i, prob)
                fixed = dg.reference_chern_classes(i, prob, corrected=True)
                via_exp = dg.chern_classes_by_exp_log(i, prob)
                for k in (2, 3):
                    out.append(check(f"c_{k} stated form {tag}", stated[k].debug_lines(), c[k].debug_lines(),
                                     "Newton identities vs stated closed form", note_on_mismatch=True))
                    out.append(check(f"c_{k} corrected form {tag}", fixed[k].debug_lines(), c[k].debug_lines(),
                                     "Newton identities"))
                    out.append(check(f"c_{k} discrepancy killed by eta_2, eta_3, gamma_23 {tag}", True,
                                     dg.discrepancy_annihilated(c[k] - stated[k], prob), "irrelevance"))
                    out.append(check(f"c_{k} exp-log route {tag}", c[k].debug_lines(), via_exp[k].debug_lines(),
                                     "c = exp(sum (-1)^{k-1}(k-1)! ch_k)"))
                ok = all(dg.twisted_entry(i, j, prob, reduced=True) == dg.reference_twisted_entry(i, j, prob)
                         for j in range(2 * r + 1))
                out.append(check(f"reduced twisted entries {tag}", True, ok, "c'(M_i) e^theta"))
    return out


def stated_form_mismatches(checks) -> list[Check]:
    return [c for c in checks if c.status == "note"]


def degeneracy_suite(rs=(2, 3, 4), threads=None, m_shift=7) -> list[Check]:
    out = []
    for r in rs:
        prob = dg.DegeneracyProblem(r)
        rep = dg.fp_report(prob, threads=threads)
        out.append(check(f"[Z].[Delta x Pic] = closed form, r={r}", rep.closed_form, rep.diagonal,
                         "degeneracy class against the diagonal"))
        out.append(check(f"double V-sum = closed form, r={r}", rep.closed_form, rep.combinatorial,
                         "Vandermonde double sum"))
        out.append(check(f"eta_2.det = eta_3.det, r={r}", rep.point_slice, rep.point_slice_other, "symmetry"))
        out.append(check(f"eta_2.det = single/double V-sum, r={r}", rep.breakdown, rep.point_slice,
                         "point slice breakdown"))
        out.append(check(f"gamma_23.det = three contributions, r={r}", sum(rep.gamma23_parts.values()),
                         rep.gamma23, "gamma_23 breakdown"))
        other = dg.fp_report(dg.DegeneracyProblem(r, prob.m + m_shift), threads=threads)
        out.append(check(f"m-independence, r={r}", (rep.diagonal, rep.point_slice),
                         (other.diagonal, other.point_slice), "twist choice"))
    if 3 in rs:
        out.append(check("r=3 value", Fraction(240), ex.fp_closed_form(3), "direct evaluation"))
    return out


def theta_pure_suite(r_max=8) -> list[Check]:
    out = []
    for r in range(1, r_max + 1):
        v = ex.vandermonde_v(range(0, 2 * r + 1, 2))
        out.append(check(f"det(1/(2i-j)!) = V(0,2,...,2r), r={r}", v,
                         dg.rational_determinant(dg.theta_pure_matrix(r)), "theta-pure part"))
        if r >= 2:
            engine = dg.theta_pure_coefficients(dg.DegeneracyProblem(r))
            out.append(check(f"engine theta-pure matrix, r={r}", dg.theta_pure_matrix(r), engine,
                             "theta-pure part read off the engine"))
    return out


def prym_suite(r_max=10) -> list[Check]:
    out = []
    x = dv.solve_prym_class(3)
    got = (x.a, x.b0p, x.b0pp, x.b0ram, tuple(x.b[i] for i in range(1, 6)))
    want = (Fraction(7), Fraction(1), Fraction(4), Fraction(3, 2), tuple(map(Fraction, (15, 14, 12, 9, 5))))
    out.append(check("Prym-BN class, r=3", want, got, "7 lambda - delta0' - 4 delta0'' - 3/2 delta0ram - ..."))
    for r in range(3, r_max + 1):
        x = dv.solve_prym_class(r)
        forms = dv.prym_closed_forms(x.g)
        got = {"a": x.a, "b0p": x.b0p, "b0pp": x.b0pp, "b0ram": x.b0ram}
        got.update({f"b{i}": x.b[i] for i in range(1, x.g)})
        out.append(check(f"closed forms, r={r}", forms, got, "Prym-BN class closed forms"))
        res = {k: v for k, v in dv.prym_relation_residuals(x).items() if v != 0}
        out.append(check(f"relation families, r={r}", {}, res, "test curves, pullback, slopes"))
        out.append(check(f"pullback to genus 0 vanishes, r={r}", True, dv.pullback_to_genus0(x).is_zero(),
                         "i^* of the class"))
    return out


def strongly_bn_suite(r_max=10, engine_rs=(3, 4), threads=None) -> list[Check]:
    out = []
    for r in range(3, r_max + 1):
        x = dv.strongly_bn_class(r)
        g = x.g
        want = {"a1": Fraction(g * g + g + 2, 8), "a": Fraction(g + 2), "b0": Fraction(g + 1, 6),
                "b_12": {i: Fraction((g - i) * (g + i + 1), 2) for i in range(g)}}
        got = {"a1": x.a1, "a": x.a, "b0": x.b0, "b_12": dict(x.b_12)}
        out.append(check(f"strongly-BN closed forms, r={r}", want, got, "strongly-BN class"))
        out.append(check(f"a1 = (g^2+g+2)/(4g(g+1)) b_(0,12), r={r}",
                         Fraction(g * g + g + 2, 4 * g * (g + 1)) * x.b_12[0], x.a1, "test curve A"))
    for r in engine_rs:
        prob = dg.DegeneracyProblem(r)
        det = dg.fp_determinant(prob, threads=threads)
        engine = dg.intersect_point_slice(det, prob.g)
        res = dv.resolve_normalization(r, engine)
        out.append(check(f"c[(2g-1)a1 + a2 - b_(0,12)] = eta_2.det, r={r}", res["predicted_n_over_2g_minus_2"],
                         engine, "test curve A against the engine, c b_(0,12) = n/(2g-2)"))
        out.append(check(f"stated c reproduces eta_2.det, r={r}", res["predicted_stated"], engine,
                         "stated normalization c", note_on_mismatch=True))
        out.append(check(f"engine c = pullback c, r={r}", res["engine_c"], res["pullback_c"],
                         "pullback to M_{g,1} against mu(BN + W)"))
        out.append(check(f"engine c = 2 x stated c, r={r}", 2 * res["stated_c"], res["engine_c"],
                         "factor-2 resolution"))
    return out


def kodaira_suite() -> list[Check]:
    rep = app.kodaira_r14_2()
    return [
        check("combination coefficients", app.KODAIRA_EXPECTED, rep.coefficients, "R_{14,2} canonical class"),
        check("lambda/delta0'/delta0ram target", app.KODAIRA_TARGET, rep.combination[1:], "13, -2, -3"),
        check("psi coefficient", Fraction(22963, 25428), rep.psi, "19289/50856 + 15*683/19560"),
        check("psi coefficient < 1", True, rep.psi_below_one, "general type criterion"),
    ]


def nikulin_suite(r_max=8, sign_r_max=30) -> list[Check]:
    out = []
    for r in range(3, r_max + 1):
        g = dv.prym_genus(r)
        out.append(check(f"Xi_g . class = 1 - g/3, r={r}", 1 - Fraction(g, 3), app.nikulin_pairing(r),
                         "Nikulin pencil"))
    bad = [r for r in range(3, sign_r_max + 1) if not app.nikulin_pairing(r) < 0]
    out.append(check(f"Xi_g pairing negative, r=3..{sign_r_max}", [], bad, "Nikulin curves lie in the divisor"))
    return out


def rho_suite(r_max=20, solver_r_max=10) -> list[Check]:
    out = []
    bad = [r for r in range(2, r_max + 1) if app.rho(2 * dv.prym_genus(r) - 1, r, 2 * dv.prym_genus(r) - 2) != -r - 2]
    out.append(check(f"rho(2g-1, r, 2g-2) = -r-2, r=2..{r_max}", [], bad, "Prym curves in Delta_0''"))
    bad = []
    for r in range(2, r_max + 1):
        g = r * (r + 1) // 2 - 1
        prof = app.MultivanishingProfile(tuple(range(0, 2 * r + 1, 2)), tuple(range(0, 2 * r + 2, 2)))
        if app.rho_multivanishing(g, r, g + r, prof) != -1:
            bad.append(r)
    out.append(check(f"multivanishing rho = -1, r=2..{r_max}", [], bad, "strongly-BN divisoriality"))
    for r in range(3, solver_r_max + 1):
        g = dv.prym_genus(r)
        seq = app.vanishing_sequence_solver(r, "secondrel").orders
        out.append(check(f"secondrel unique sequence, r={r}", tuple(g - r - 1 + 2 * i for i in range(r + 1)), seq,
                         "a_i = g-r+2i-1"))
        for case, shift in (("even", 2), ("odd", 1)):
            n = len(app.vanishing_sequence_candidates(r, case))
            feasible = app.feasible_parity_case(r) == case
            out.append(check(f"{case} case solutions, r={r}", 1 if feasible else 0, n,
                             "parity of g-r decides which multidegree occurs"))
            if feasible:
                seq = app.vanishing_sequence_solver(r, case).orders
                out.append(check(f"{case} case sequence, r={r}", tuple(g - r - shift + 2 * i for i in range(r + 1)),
                                 seq, "multivanishing orders"))
    return out


SUITES = {
    "identities": identities,
    "mu-nu": mu_nu_suite,
    "ring": ring_crosscheck,
    "degeneracy": degeneracy_suite,
    "theta-pure": theta_pure_suite,
    "prym": prym_suite,
    "strongly-bn": strongly_bn_suite,
    "kodaira": kodaira_suite,
    "nikulin": nikulin_suite,
    "rho": rho_suite,
}


def verify_all(r_max: int = 4, identity_r_max: int = 40, threads=None) -> dict[str, list[Check]]:
    rs = tuple(range(2, r_max + 1))
    return {
        "identities": identities(identity_r_max, identity_r_max, identity_r_max, 100),
        "mu-nu": mu_nu_suite(max(12, r_max)),
        "ring": ring_crosscheck(rs),
        "degeneracy": degeneracy_suite(rs, threads=threads),
        "theta-pure": theta_pure_suite(max(8, r_max)),
        "prym": prym_suite(max(10, r_max)),
        "strongly-bn": strongly_bn_suite(max(10, r_max), tuple(r for r in rs if r >= 3), threads=threads),
        "kodaira": kodaira_suite(),
        "nikulin": nikulin_suite(max(8, r_max)),
        "rho": rho_suite(max(20, r_max), max(10, r_max)),
    }
