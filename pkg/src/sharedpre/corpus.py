"""The shipped corpus and the invariant suite run over it."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from importlib import resources

from .constellation import (CapExceeded, fiber_product, genus, monodromy_group,
                            normalization_genus, normalization_genus_tuple_oracle,
                            projection_is_equivariant, cycles)
from .galois import deck_group, is_galois
from .maps import fiber_product_curve_factors, map_from_expr, point_str
from .monodromy import extract_monodromy, extract_monodromy_joint
from .orbifold import GENUS_LE_1, classify
from .orbits import (construct_sets, generators_for, orbit, verify_shared_preimage)
from .scalar import QQ, fraction_str


def load_corpus():
    text = resources.files("sharedpre").joinpath("data/corpus.json").read_text()
    return json.loads(text)


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def expect(self, cond, msg):
        self.checks += 1
        if not cond:
            self.failures.append(msg)

    def to_json(self):
        return {"suite": self.name, "pass": self.passed, "checks": self.checks,
                "failures": self.failures}


@dataclass
class CorpusReport:
    suites: list
    rows: list  # per-map summary rows (dicts)
    orbit_runs: list  # (name, OrbitSet)

    @property
    def passed(self):
        return all(s.passed for s in self.suites)

    def to_json(self):
        return {"pass": self.passed, "suites": [s.to_json() for s in self.suites],
                "maps": self.rows}


ROW_FIELDS = ["name", "expr", "degree", "signature", "chi", "verdict", "galois",
              "monodromy_order", "normalization_genus", "cycle_types"]


def _map_suites(corpus, precision):
    equiv = SuiteResult("genus-verdict-equivalence")
    rh = SuiteResult("riemann-hurwitz-parity")
    mono = SuiteResult("monodromy-vs-portrait")
    gal = SuiteResult("galois-consistency")
    norm = SuiteResult("normalization-oracle")
    rows = []
    for entry in corpus["maps"]:
        name = entry["name"]
        P = map_from_expr(entry["expr"])
        v = classify(P)
        try:
            c = extract_monodromy(P, precision)
            mono.expect(genus(c) == 0, f"{name}: extracted genus is not 0")
        except ArithmeticError as exc:
            mono.expect(False, f"{name}: {exc}")
            continue
        total = sum(c.degree - len(cycles(p)) for p in c.perms)
        rh.expect(total % 2 == 0, f"{name}: odd ramification total")
        order, capped = monodromy_group(c)
        g = normalization_genus(c)
        equiv.expect((v.chi >= 0) == v.in_list == (g <= 1),
                     f"{name}: chi {v.chi}, in list {v.in_list}, g(N) {g}")
        try:
            g2 = normalization_genus_tuple_oracle(c)
            norm.expect(g == g2, f"{name}: regular action {g} vs tuple action {g2}")
        except CapExceeded:
            pass
        cert = is_galois(P)
        gal.expect(cert.is_galois == (order == P.degree) == entry["galois"],
                   f"{name}: is_galois {cert.is_galois}, |G| {order}, deg {P.degree}")
        rows.append({"name": name, "expr": entry["expr"], "degree": P.degree,
                     "signature": str(v.signature), "chi": fraction_str(v.chi),
                     "verdict": "<=1" if v.genus_bound == GENUS_LE_1 else ">=2",
                     "galois": cert.is_galois, "monodromy_order": order,
                     "normalization_genus": g,
                     "cycle_types": " ".join(
                         f"{point_str(b) if not isinstance(b, str) else b}:"
                         + ".".join(map(str, t)) for b, t in c.branch_data().items())})
    return [equiv, rh, mono, gal, norm], rows


def _fiber_suite(corpus, precision, rh):
    part = SuiteResult("fiber-product-partition")
    for exprs in corpus["fiber_products"]:
        maps = [map_from_expr(e) for e in exprs]
        label = " x ".join(exprs)
        cs = extract_monodromy_joint(maps, precision)
        comps = fiber_product(cs)
        total = 1
        for P in maps:
            total *= P.degree
        part.expect(sum(len(c.orbit) for c in comps) == total, f"{label}: orbit sizes")
        for comp in comps:
            for i, P in enumerate(maps):
                part.expect(comp.degrees_to_factors[i] * P.degree == len(comp.orbit),
                            f"{label}: projection degree {i + 1}")
                part.expect(projection_is_equivariant(comp, cs, i),
                            f"{label}: projection {i + 1} is not equivariant")
            ind = comp.induced
            tot = sum(ind.degree - len(cycles(p)) for p in ind.perms)
            rh.expect(tot % 2 == 0, f"{label}: odd ramification total on a component")
        if len(maps) == 2:
            factors = fiber_product_curve_factors(*maps)
            part.expect(len(factors) == len(comps),
                        f"{label}: {len(comps)} components vs {len(factors)} curve factors")
    return part


def _orbit_suites(corpus):
    mono = SuiteResult("orbit-monotonicity")
    deck = SuiteResult("deck-invariance")
    ver = SuiteResult("windowed-verification")
    runs = []
    for run in corpus["orbit_runs"]:
        maps = [map_from_expr(e) for e in run["maps"]]
        gens = generators_for(maps, run["mu"])
        base = QQ(run["base"])
        S = orbit(base, gens, run["depth"])
        runs.append((run["name"], S))
        prev = orbit(base, gens, run["depth"] - 1)
        mono.expect(all(p in S and S.word_length[p] == n for p, n in prev.word_length.items()),
                    f"{run['name']}: depth {run['depth'] - 1} orbit not contained")
        for P in maps:
            for g in deck_group(P).elements:
                for s in S.points:
                    if S.word_length[s] < S.depth:
                        deck.expect(g(s) in S, f"{run['name']}: {g} moves {point_str(s)} out")
        sets = construct_sets(maps, S)
        rep = verify_shared_preimage(maps, sets, S, run["window"])
        ver.expect(rep.passed, f"{run['name']}: verification failed")
    return [mono, deck, ver], runs


def run_corpus(precision: int = 64, determinism: bool = True) -> CorpusReport:
    corpus = load_corpus()
    suites, rows = _map_suites(corpus, precision)
    rh = suites[1]
    suites.append(_fiber_suite(corpus, precision, rh))
    orbit_suites, runs = _orbit_suites(corpus)
    suites.extend(orbit_suites)
    report = CorpusReport(suites, rows, runs)
    if determinism:
        det = SuiteResult("determinism")
        again = run_corpus(precision, determinism=False)
        first = json.dumps(report.to_json(), indent=2)
        second = json.dumps(again.to_json(), indent=2)
        det.expect(first == second, "two corpus runs differ")
        suites.append(det)
    return report


def write_report(report: CorpusReport, out_dir):
    """corpus.tsv, suites.tsv and figures in out_dir; returns the written paths."""
    import csv
    from pathlib import Path

    from .plotting import chi_chart, orbit_growth, orbit_scatter
    from fractions import Fraction

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    p = out / "corpus.tsv"
    with open(p, "w", newline="") as fh:
        w = csv.DictWriter(fh, ROW_FIELDS, delimiter="\t", lineterminator="\n")
        w.writeheader()
        for row in report.rows:
            w.writerow(row)
    paths.append(p)
    p = out / "suites.tsv"
    with open(p, "w", newline="") as fh:
        w = csv.writer(fh, delimiter="\t", lineterminator="\n")
        w.writerow(["suite", "pass", "checks", "failures"])
        for s in report.suites:
            w.writerow([s.name, "PASS" if s.passed else "FAIL", s.checks, len(s.failures)])
    paths.append(p)
    paths.append(chi_chart([(r["name"], Fraction(r["chi"])) for r in report.rows],
                           out / "chi.svg"))
    paths.append(orbit_growth(report.orbit_runs, out / "orbit_growth.svg"))
    for name, S in report.orbit_runs:
        paths.append(orbit_scatter(S, out / f"orbit_{name}.svg"))
    return paths
