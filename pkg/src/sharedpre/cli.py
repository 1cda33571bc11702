"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 input error, 3 undetermined
(a precision, group-order or point cap was hit).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

from .constellation import (CapExceeded, Constellation, InvalidConstellation, align,
                            fiber_product, genus, monodromy_group, normalization_genus,
                            normalization_genus_tuple_oracle)
from .galois import DeckReconstructionError, NotGalois, deck_group, is_galois
from .maps import (FieldError, Moebius, RationalMap, point_from_json, point_str,
                   point_to_json)
from .orbifold import classify
from .orbits import (DeckContainmentError, OrbitCapExceeded, OrbitSet, Undetermined,
                     ValueSet, WindowTooDeep, choose_base, construct_sets, generators_for, orbit,
                     reduce_finite, verify_shared_preimage)
from .scalar import QQ, FieldSpec, PrecisionCapExceeded

CONFIG_ENV = "SHAREDPRE_CONFIG"

OK, FAILED, INPUT_ERROR, UNDETERMINED = 0, 1, 2, 3


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    precision: int = 64
    precision_cap: int = 4096
    group_cap: int = 10080
    point_cap: int = 10 ** 6
    depth: int = 12
    window: int = 8
    format: str = "text"

    def validate(self):
        for name in ("precision", "precision_cap", "group_cap", "point_cap"):
            if getattr(self, name) <= 0:
                raise InputError(f"config: {name} must be positive")
        if self.format not in ("text", "json"):
            raise InputError("config: format must be text or json")


def load_config(path=None) -> RunConfig:
    path = path or os.environ.get(CONFIG_ENV)
    cfg = RunConfig()
    if path:
        data = _read_json(path)
        unknown = set(data) - set(asdict(cfg))
        if unknown:
            raise InputError(f"config: unknown keys {sorted(unknown)}")
        cfg = RunConfig(**{**asdict(cfg), **data})
    cfg.validate()
    return cfg


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}")


def _field(data, default=QQ):
    return FieldSpec.from_json(data["field"]) if isinstance(data, dict) and "field" in data \
        else default


def _map(data, field=QQ) -> RationalMap:
    if isinstance(data, str):
        return RationalMap.from_json({"expr": data}, field)
    if isinstance(data, dict) and "map" in data:
        return _map(data["map"], _field(data, field))
    return RationalMap.from_json(data, field)


def _maps(data):
    K = _field(data)
    items = data["maps"] if isinstance(data, dict) else data
    return [_map(m, K) for m in items], K


def _moebius(x, field):
    if isinstance(x, str):
        from .maps import moebius_from_expr

        return moebius_from_expr(x, field)
    return Moebius.from_json(x, field)


def _emit(obj, text, cfg, out=None):
    out = out or sys.stdout
    if cfg.format == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


# --- subcommands ----------------------------------------------------------------------

def cmd_classify(args, cfg):
    P = _map(_read_json(args.map))
    v = classify(P)
    _emit(v.to_json(), v.summary(), cfg)
    return OK


def cmd_galois(args, cfg):
    data = _read_json(args.map)
    P = _map(data)
    cert = is_galois(P, _field(data, P.field))
    lines = [f"galois: {'yes' if cert.is_galois else 'no'} ({cert.note})"]
    if cert.witness_fiber is not None:
        w = cert.witness_fiber
        lines.append(f"witness: fiber over {w.value} has local degrees "
                     + ",".join(map(str, w.local_degrees)))
    if cert.group is not None:
        lines.append(f"deck group of order {cert.group.order}: "
                     + ", ".join(str(g) for g in cert.group.elements))
    _emit(cert.to_json(), "\n".join(lines), cfg)
    return OK


def cmd_deck(args, cfg):
    data = _read_json(args.map)
    P = _map(data)
    G = deck_group(P, _field(data, P.field))
    text = f"order {G.order}\n" + "\n".join(str(g) for g in G.elements)
    _emit(G.to_json(), text, cfg)
    return OK


def _constellations(data, cfg):
    if "constellations" in data:
        K = _field(data)
        return align([Constellation.from_json(c, K) for c in data["constellations"]])
    from .monodromy import extract_monodromy_joint

    maps, _ = _maps(data)
    return extract_monodromy_joint(maps, cfg.precision, cfg.precision_cap)


def cmd_fiberprod(args, cfg):
    data = _read_json(args.input)
    cs = _constellations(data, cfg)
    comps = fiber_product(cs)
    lines = [f"{len(comps)} component(s)"]
    for n, c in enumerate(comps, 1):
        lines.append(f"component {n}: degree {len(c.orbit)}, genus {c.genus}, "
                     f"degrees to factors {list(c.degrees_to_factors)}")
    _emit({"components": [c.to_json() for c in comps]}, "\n".join(lines), cfg)
    return OK


def _single_constellation(data, cfg):
    if "perms" in data:
        return Constellation.from_json(data, _field(data))
    from .monodromy import extract_monodromy

    return extract_monodromy(_map(data), cfg.precision, cfg.precision_cap)


def cmd_normalize(args, cfg):
    c = _single_constellation(_read_json(args.input), cfg)
    order, capped = monodromy_group(c, cfg.group_cap)
    if capped:
        raise CapExceeded(f"monodromy group exceeds {cfg.group_cap} elements")
    g = normalization_genus(c, cfg.group_cap)
    out = {"degree": c.degree, "monodromy_order": order, "normalization_genus": g}
    lines = [f"monodromy group order {order}", f"normalization genus {g}"]
    try:
        g2 = normalization_genus_tuple_oracle(c)
        out["tuple_oracle_genus"] = g2
        lines.append(f"tuple-action oracle genus {g2}")
        if g2 != g:
            _emit(out, "\n".join(lines + ["MISMATCH"]), cfg)
            return FAILED
    except CapExceeded:
        lines.append("tuple-action oracle skipped (out of scale)")
    _emit(out, "\n".join(lines), cfg)
    return OK


def cmd_monodromy(args, cfg):
    from .monodromy import extract_monodromy

    P = _map(_read_json(args.map))
    c = extract_monodromy(P, args.precision or cfg.precision, cfg.precision_cap)
    text = f"degree {c.degree}, genus {genus(c)}\n" + str(c).replace("; ", "\n")
    _emit(c.to_json(), text, cfg)
    return OK


def _orbit_text(S):
    lines = [f"orbit of {point_str(S.base)}: {len(S)} points up to word length {S.depth}"]
    for n in range(S.depth + 1):
        pts = [point_str(p) for p in S.points if S.word_length[p] == n]
        if pts:
            lines.append(f"{n}: " + " ".join(pts))
    return "\n".join(lines)


def cmd_orbit(args, cfg):
    data = _read_json(args.gens)
    K = _field(data)
    items = data["generators"] if isinstance(data, dict) else data
    gens = [_moebius(g, K) for g in items]
    base = point_from_json(args.base, K)
    S = orbit(base, gens, args.depth if args.depth is not None else cfg.depth,
              args.cap or cfg.point_cap)
    if args.svg:
        from .plotting import orbit_scatter

        orbit_scatter(S, args.svg)
    out = S.to_json()
    if K is not QQ:
        out["field"] = K.to_json()
    _emit(out, _orbit_text(S), cfg)
    return OK


def _load_orbit(path):
    data = _read_json(path)
    missing = [k for k in ("base", "generators", "depth", "points") if k not in data]
    if missing:
        raise InputError(f"{path}: not an orbit file (missing {', '.join(missing)}); "
                         "write one with `sharedpre orbit --format json`")
    K = _field(data)
    gens = [_moebius(g, K) for g in data["generators"]]
    wl = {point_from_json(p["point"], K): int(p["word_length"]) for p in data["points"]}
    return OrbitSet(point_from_json(data["base"], K), gens, int(data["depth"]), wl), K


def cmd_construct(args, cfg):
    maps, _ = _maps(_read_json(args.maps))
    S, K = _load_orbit(args.orbit)
    sets = construct_sets(maps, S, K if K is not QQ else None)
    lines = []
    for i, vs in enumerate(sets, 1):
        vals = vs.within(S.depth)
        lines.append(f"K{i}: {len(vals)} values: " + " ".join(point_str(v) for v in vals[:40])
                     + (" ..." if len(vals) > 40 else ""))
    _emit({"sets": [v.to_json() for v in sets]}, "\n".join(lines), cfg)
    return OK


def cmd_verify(args, cfg):
    data = _read_json(args.input)
    maps, K = _maps(data)
    depth = args.depth if args.depth is not None else data.get("depth", cfg.depth)
    window = args.window if args.window is not None else data.get("window", cfg.window)
    if "generators" in data:
        gens = [_moebius(g, K) for g in data["generators"]]
    else:
        gens = generators_for(maps, data.get("mu", "z + 1"), K if K is not QQ else None)
    if "base" in data:
        base, auto_base = point_from_json(data["base"], K), False
    else:
        base, auto_base = choose_base(maps, gens), True
    S = orbit(base, gens, depth, cfg.point_cap)
    if "sets" in data:
        sets = [ValueSet({point_from_json(v, K): 0 for v in vs}, i)
                for i, vs in enumerate(data["sets"])]
    else:
        sets = construct_sets(maps, S, K if K is not QQ else None)
    rep = verify_shared_preimage(maps, sets, S, window, K if K is not QQ else None,
                                 require_single_k=bool(data.get("require_single_k")))
    if auto_base:
        rep.notes.insert(0, f"no base given; chose {point_str(base)}, the first rational in "
                            "height order that is unramified, not a pole, and not fixed by "
                            "a generator")
    lines = [f"verification {'PASS' if rep.passed else 'FAIL'}: depth {depth}, "
             f"window {window}, deck growth bound {rep.growth_bound}",
             f"  base {point_str(base)}; generators: " + ", ".join(str(g) for g in gens)]
    for c in rep.checks:
        lines.append(f"  {c.name}: {'pass' if c.passed else 'fail'} ({c.checked} checked)")
        lines.extend(f"    counterexample: {x}" for x in c.counterexamples[:5])
    for i, pre in enumerate(rep.preimages_in_window, 1):
        lines.append(f"  P{i}^-1(K{i}) in window: {len(pre)} points")
    lines.extend(f"  note: {n}" for n in rep.notes)
    obj = {**rep.to_json(), "base": point_to_json(base), "generators": [str(g) for g in gens]}
    _emit(obj, "\n".join(lines), cfg)
    return OK if rep.passed else FAILED


def cmd_reduce_finite(args, cfg):
    maps, K = _maps(_read_json(args.maps))
    out = reduce_finite(maps, K if K is not QQ else None, cfg.group_cap)
    if out.status == "finite":
        r = out.reduction
        lines = [f"finite group of order {r.group.order}", f"A = {r.A}"]
        lines += [f"F{i} = {F}" for i, F in enumerate(r.factors, 1)]
    elif out.status == "infinite":
        c = out.certificate
        lines = ["group is infinite: no reduction",
                 f"element of infinite order: {c.element}",
                 "word-ball sizes: " + " ".join(map(str, c.ball_sizes))]
    else:
        lines = [f"undetermined: {out.note}"]
    _emit(out.to_json(), "\n".join(lines), cfg)
    return UNDETERMINED if out.status == "undetermined" else OK


def cmd_corpus_check(args, cfg):
    from .corpus import run_corpus, write_report

    report = run_corpus(cfg.precision)
    lines = [f"{'PASS' if s.passed else 'FAIL'} {s.name} ({s.checks} checks)"
             + "".join(f"\n  {f}" for f in s.failures[:5]) for s in report.suites]
    if args.out:
        paths = write_report(report, args.out)
        lines.append("wrote " + " ".join(str(Path(p).name) for p in paths))
    _emit(report.to_json(), "\n".join(lines), cfg)
    return OK if report.passed else FAILED


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS,
                        help=f"JSON config file (default: ${CONFIG_ENV})")
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS,
                        help="output format")
    p = argparse.ArgumentParser(prog="sharedpre", parents=[common],
                                description="Rational maps with shared preimages: "
                                "classification, Galois data, monodromy and orbit constructions.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    add("classify", cmd_classify, "orbifold signature and genus verdict").add_argument("map")
    add("galois", cmd_galois, "Galois test with certificate").add_argument("map")
    add("deck", cmd_deck, "deck transformation group").add_argument("map")
    add("fiberprod", cmd_fiberprod, "fiber-product components").add_argument("input")
    add("normalize", cmd_normalize, "normalization genus").add_argument("input")
    sp = add("monodromy", cmd_monodromy, "numeric monodromy extraction")
    sp.add_argument("map")
    sp.add_argument("--precision", type=int)
    sp = add("orbit", cmd_orbit, "truncated orbit of a point")
    sp.add_argument("--base", required=True)
    sp.add_argument("--gens", required=True, help="JSON list of Moebius generators")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--cap", type=int)
    sp.add_argument("--svg", help="write a scatter plot of the orbit")
    sp = add("construct", cmd_construct, "value sets K_i = P_i(S)")
    sp.add_argument("--maps", required=True)
    sp.add_argument("--orbit", required=True)
    sp = add("verify", cmd_verify, "windowed shared-preimage verification")
    sp.add_argument("input")
    sp.add_argument("--depth", type=int)
    sp.add_argument("--window", type=int)
    add("reduce-finite", cmd_reduce_finite, "finite-group reduction").add_argument(
        "--maps", required=True)
    add("corpus-check", cmd_corpus_check, "invariant suite over the shipped corpus").add_argument(
        "--out", help="directory for TSV tables and figures")
    return p


INPUT_ERRORS = (InputError, InvalidConstellation, FieldError, KeyError, TypeError,
                ValueError, DeckContainmentError, WindowTooDeep, NotGalois)
CAP_ERRORS = (PrecisionCapExceeded, OrbitCapExceeded, CapExceeded, Undetermined)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else OK
    try:
        cfg = load_config(getattr(args, "config", None))
        if getattr(args, "format", None):
            cfg.format = args.format
        return args.func(args, cfg)
    except CAP_ERRORS as exc:
        print(f"undetermined: {exc}", file=sys.stderr)
        return UNDETERMINED
    except DeckReconstructionError as exc:
        hint = f" (needs a root of {exc.hint})" if exc.hint else ""
        print(f"error: {exc}{hint}", file=sys.stderr)
        return INPUT_ERROR
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
