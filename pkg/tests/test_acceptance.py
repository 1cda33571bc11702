"""One test per acceptance criterion; each records a pass/fail line for the summary."""

import time
from fractions import Fraction

from sharedpre.constellation import (align, cycle_type, fiber_product, genus, identity,
                                     monodromy_group, normalization_genus,
                                     normalization_genus_tuple_oracle, product)
from sharedpre.corpus import load_corpus, run_corpus
from sharedpre.galois import deck_group, is_deck_transformation, is_galois, standard_family
from sharedpre.maps import compose, critical_structure, fiber_product_curve_factors, map_from_expr
from sharedpre.monodromy import extract_monodromy, extract_monodromy_joint
from sharedpre.orbifold import GENUS_GE_2, classify
from sharedpre.orbits import (construct_sets, finite_group_reduction, generators_for, orbit,
                              reduce_finite, verify_shared_preimage)
from sharedpre.scalar import QQ

RESULTS = {}


class Criterion:
    """Collects named sub-checks, records the outcome and fails with all misses listed."""

    def __init__(self, n, title):
        self.n, self.title, self.misses = n, title, []

    def check(self, cond, what):
        if not cond:
            self.misses.append(what)

    def finish(self):
        ok = not self.misses
        detail = self.title if ok else f"{self.title}; failed: " + "; ".join(self.misses)
        RESULTS[self.n] = (ok, detail)
        print(f"criterion {self.n}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail


def _sorted_ints(points):
    return sorted(p.to_fraction() for p in points)


def test_criterion_01_intro_example():
    c = Criterion(1, "z^2, (z+1)^2 with {-z, -z-2, z+1}, depth 12, window 8")
    t0 = time.perf_counter()
    maps = [map_from_expr("z^2"), map_from_expr("(z+1)^2")]
    gens = generators_for(maps, "z + 1")
    S = orbit(QQ(0), gens, 12)
    sets = construct_sets(maps, S)
    rep = verify_shared_preimage(maps, sets, S, 8)
    elapsed = time.perf_counter() - t0
    c.check([str(g) for g in gens] == ["-z", "-z - 2", "z + 1"], "generator list")
    c.check(rep.passed, "verify_shared_preimage passes")
    integers = list(range(-8, 9))
    for i, pre in enumerate(rep.preimages_in_window, 1):
        got = _sorted_ints(pre)
        c.check(got == integers, f"window preimages of map {i} are {got[0]}..{got[-1]}, "
                                 "not the integers in [-8, 8]")
    squares = [Fraction(k * k) for k in range(9)]
    for i, (P, K) in enumerate(zip(maps, sets), 1):
        image = sorted({P(s).to_fraction() for s in S.within(8) if P(s) in K})
        c.check(image == squares, f"K{i} within the window image is {{{', '.join(map(str, image))}}}"
                                  ", not {0, 1, 4, ..., 64}")
    c.check(elapsed < 1.0, f"runtime {elapsed:.2f} s")
    c.finish()


CRIT2_MAPS = ["z^2", "z^3", "z^4", "z^5", "z^6", "(z^2+z^(-2))/2", "(z^3+z^(-3))/2",
              "(z^4+z^(-4))/2", "(z^5+z^(-5))/2", "z^3-3*z", "z^4-2*z^2", "z^4+z^3", "z^4-4*z"]


def test_criterion_02_genus_verdict_equivalence():
    c = Criterion(2, f"chi >= 0, list membership and g(N) <= 1 agree on {len(CRIT2_MAPS)} maps")
    t0 = time.perf_counter()
    for expr in CRIT2_MAPS:
        v = classify(map_from_expr(expr))
        g = normalization_genus(extract_monodromy(map_from_expr(expr)))
        verdicts = (v.chi >= 0, v.in_list, g <= 1)
        c.check(len(set(verdicts)) == 1, f"{expr}: {verdicts}")
    elapsed = time.perf_counter() - t0
    c.check(elapsed < 10.0, f"runtime {elapsed:.2f} s")
    c.finish()


def test_criterion_03_exact_classifier_values():
    c = Criterion(3, "exact signatures and Euler characteristics")
    for n in range(2, 7):
        v = classify(map_from_expr(f"z^{n}"))
        c.check(v.chi == Fraction(2, n), f"z^{n}: chi {v.chi}")
    for expr, sig, chi in [("z^3-3*z", (2, 2, 3), Fraction(1, 3)),
                           ("z^4-4*z", (2, 2, 2, 4), Fraction(-1, 4)),
                           ("z^4+z^3", (2, 3, 4), Fraction(1, 12))]:
        v = classify(map_from_expr(expr))
        c.check(v.signature.values == sig and v.chi == chi,
                f"{expr}: {v.signature}, chi {v.chi}")
    c.check(classify(map_from_expr("z^4-4*z")).genus_bound == GENUS_GE_2,
            "z^4-4z verdict genus >= 2")
    c.finish()


def test_criterion_04_normalization_genus():
    c = Criterion(4, "z^4-4z: |G| = 24, g(N) = 4 by three routes")
    t0 = time.perf_counter()
    P = map_from_expr("z^4-4*z")
    con = extract_monodromy(P)
    order, capped = monodromy_group(con)
    g = normalization_genus(con)
    chi = classify(P).chi
    c.check((order, capped) == (24, False), f"|G| = {order}")
    c.check(g == 4, f"regular action genus {g}")
    c.check(1 - order * chi / 2 == g, f"1 - |G| chi / 2 = {1 - order * chi / 2}")
    c.check(normalization_genus_tuple_oracle(con) == g, "tuple-action oracle")
    elapsed = time.perf_counter() - t0
    c.check(elapsed < 5.0, f"runtime {elapsed:.2f} s")
    c.finish()


def _components(p, q):
    P, Q = map_from_expr(p), map_from_expr(q)
    return P, Q, fiber_product(align(extract_monodromy_joint([P, Q])))


def test_criterion_05_fiber_products():
    c = Criterion(5, "fiber products of z^2 with (z+1)^2 and with z^3")
    P, Q, comps = _components("z^2", "(z+1)^2")
    c.check(len(comps) == 2, f"{len(comps)} components for z^2 x (z+1)^2")
    c.check(all(x.genus == 0 and x.degrees_to_factors == (1, 1) for x in comps),
            "genus 0 and projection degrees 1")
    n_curve = len(fiber_product_curve_factors(P, Q))
    c.check(n_curve == len(comps), f"{n_curve} irreducible factors of the curve")
    P, Q, comps = _components("z^2", "z^3")
    c.check(len(comps) == 1 and comps[0].genus == 0 and len(comps[0].orbit) == 6,
            "z^2 x z^3: one component of genus 0 and degree 6")
    c.check(len(fiber_product_curve_factors(P, Q)) == 1, "z^2 x z^3 curve irreducible")
    c.finish()


def test_criterion_06_deck_groups():
    c = Criterion(6, "deck groups and the standard families")
    G = deck_group(map_from_expr("(z+1)^2"))
    c.check(sorted(str(g) for g in G.elements) == ["-z - 2", "z"], "deck of (z+1)^2")
    P, D, K = standard_family("dihedral", 5)
    c.check(D.order == 10, "dihedral degree 10 order")
    c.check(all(is_deck_transformation(P, g) for g in D.elements),
            "every dihedral element satisfies the cleared-denominator identity")
    c.check(deck_group(P, K).same_elements(D), "dihedral deck group recomputed")
    families = [("power", n) for n in range(2, 7)] + [("dihedral", n) for n in range(2, 6)] \
        + [("tetrahedral", None), ("octahedral", None), ("icosahedral", None)]
    for kind, n in families:
        P, H, K = standard_family(kind, n)
        c.check(H.order == P.degree, f"{kind} {n}: |deck| {H.order} vs degree {P.degree}")
    P, H, K = standard_family("tetrahedral")
    c.check(H.order == 12 and all(is_deck_transformation(P, g) for g in H.elements),
            "tetrahedral: all 12 elements verified")
    c.check(is_galois(P, K).is_galois, "tetrahedral fibers uniform")
    c.finish()


def test_criterion_07_monodromy_extraction():
    maps = load_corpus()["maps"]
    c = Criterion(7, f"monodromy of {len(maps)} corpus maps matches the critical structure")
    for entry in maps:
        P = map_from_expr(entry["expr"])
        try:
            con = extract_monodromy(P)  # raises past the default precision cap
        except ArithmeticError as exc:
            c.check(False, f"{entry['name']}: {exc}")
            continue
        expected = sorted(e.local_degrees for e in critical_structure(P)
                          for _ in range(e.value.size))
        got = sorted(cycle_type(p) for p in con.perms if p != identity(con.degree))
        c.check(got == expected, f"{entry['name']}: cycle types {got} vs {expected}")
        c.check(product(con.perms, con.degree) == identity(con.degree),
                f"{entry['name']}: product")
        c.check(genus(con) == 0, f"{entry['name']}: genus")
    c.finish()


def test_criterion_08_two_maps_distinct_value_sets():
    c = Criterion(8, "[z^2, z + 1/z] with mu = z + 1, depth 10, window 6")
    maps = [map_from_expr("z^2"), map_from_expr("z+1/z")]
    c.check([sorted(str(g) for g in deck_group(P).elements) for P in maps]
            == [["-z", "z"], ["1/z", "z"]], "deck groups")
    S = orbit(QQ(0), generators_for(maps, "z + 1"), 10)
    K1, K2 = construct_sets(maps, S)
    c.check(set(K1.values) != set(K2.values), "K1 != K2")
    c.check(verify_shared_preimage(maps, [K1, K2], S, 6).passed, "verification passes")
    c.finish()


def test_criterion_09_finite_group_reduction():
    c = Criterion(9, "finite reduction for [z^2, (z+1/z)/2], none for [z^2, (z+1)^2]")
    maps = [map_from_expr("z^2"), map_from_expr("(z+1/z)/2")]
    out = reduce_finite(maps)
    c.check(out.status == "finite" and out.reduction.group.order == 4, "group of order 4")
    A, Fs = finite_group_reduction(maps)
    c.check(all(compose(F, P) == A for F, P in zip(Fs, maps)), "A = F1 o P1 = F2 o P2")
    maps = [map_from_expr("z^2"), map_from_expr("(z+1)^2")]
    out = reduce_finite(maps)
    c.check(out.status == "infinite" and out.certificate is not None, "growth certificate")
    c.check(finite_group_reduction(maps) is None, "reduction absent")
    c.finish()


def test_criterion_10_corpus_property_suites():
    report = run_corpus()
    by_name = {s.name: s for s in report.suites}
    needed = ["riemann-hurwitz-parity", "fiber-product-partition", "orbit-monotonicity",
              "deck-invariance", "determinism"]
    c = Criterion(10, "corpus-check suites: " + ", ".join(needed))
    for name in needed:
        s = by_name.get(name)
        c.check(s is not None and s.passed and s.checks > 0,
                f"{name}: {s.failures if s else 'missing'}")
    c.check(report.passed, "every corpus suite passes")
    c.finish()
