"""Command-line front end: synth, analyze, classify, cubes, verify.

Exit codes: 0 success; 1 a verify suite failed or some points could not be
analysed; 2 malformed input (with line and column); 3 parameter validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .beta import KINDS, p_limit
from .classify import (DEFAULT_LAMBDAS, ClassifyParams, SquareThresholds, beta_profile, classify_points,
                       scale_range, square_function)
from .cloud import PointCloud
from .parallel import ordered_map, worker_count
from .synth import FAMILIES, SynthSpec, generate

SCHEMA_VERSION = 1
EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_PARAM = 0, 1, 2, 3


class InputError(Exception):
    """Malformed input; the message carries line and column when known."""


class ParamError(Exception):
    """A parameter violates a documented constraint."""


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    resolution: float | None = None
    out: str | None = None
    # synth
    family: str = "plane"
    n: int = 2
    samples: int | None = None
    noise: float = 0.0
    depth: int = 4
    angle: float = math.pi / 3
    alpha0: float = 0.5
    # analysis
    d: int = 1
    p: float | None = None
    kind: str | None = None
    alphas: tuple = (0.0,)
    base: float = 10.0
    k_lo: int = 0
    k_hi: int | None = None
    points: tuple | None = None
    lambdas: tuple = DEFAULT_LAMBDAS
    ratio: float = SquareThresholds.ratio
    floor: float = SquareThresholds.floor
    # cubes
    rho: float = 0.5
    c0: float | None = None
    C1: float = 8.0
    C2: float = 4.0
    kappa: float = 1e-4
    delta: float = 0.1
    c1: float | None = None
    c2: float | None = None
    # verify
    suites: tuple | None = None
    clouds: int = 200
    seed: int = 0
    force: bool = False

    def echo(self) -> dict:
        """Parameters repeated on every report row."""
        keys = ("d", "p", "kind", "alphas", "base", "k_lo", "k_hi", "lambdas", "ratio", "floor", "rho", "c0",
                "C1", "C2", "kappa", "delta", "c1", "c2", "seed")
        return {k: getattr(self, k) for k in keys}


# ---------------------------------------------------------------------------
# validation


def validate(cfg: RunConfig) -> None:
    """Raise ParamError naming the violated constraint."""
    if cfg.command == "synth":
        if cfg.family not in FAMILIES:
            raise ParamError(f"family must be one of {', '.join(FAMILIES)}")
        if cfg.out is None:
            raise ParamError("synth needs --out")
        return
    if cfg.command == "verify":
        if cfg.clouds < 1:
            raise ParamError("--clouds must be positive")
        return
    if cfg.d < 1:
        raise ParamError("d must satisfy d >= 1")
    p = p_limit(cfg.d) if cfg.p is None else cfg.p
    if cfg.p is not None and cfg.p < 1:
        raise ParamError("p must satisfy p >= 1")
    if p > p_limit(cfg.d) and not cfg.force:
        raise ParamError(f"p = {p:g} exceeds p(d) = {p_limit(cfg.d):g} (infinite for d <= 2, 2d/(d-2) otherwise); "
                         "pass --force to override")
    if cfg.kind is not None and cfg.kind not in KINDS:
        raise ParamError(f"kind must be one of {', '.join(KINDS)}")
    if cfg.kind in ("beta_content", "beta_bar") and not np.isfinite(p):
        raise ParamError("content beta numbers need a finite p")
    if not cfg.base > 1:
        raise ParamError("base must satisfy base > 1")
    for a in cfg.alphas:
        if not 0.0 <= a < 1.0:
            raise ParamError("every alpha must lie in [0, 1)")
    if not all(lam > 0 for lam in cfg.lambdas):
        raise ParamError("apertures must be positive")
    if not 0 < cfg.ratio < 1 or not cfg.floor > 0:
        raise ParamError("verdict thresholds need 0 < ratio < 1 and floor > 0")
    if not 0 < cfg.rho < 1:
        raise ParamError("rho must lie in (0, 1)")
    for name in ("C1", "C2", "delta", "kappa") + (("c0",) if cfg.c0 is not None else ()):
        if not getattr(cfg, name) > 0:
            raise ParamError(f"{name} must be positive")
    if not (cfg.kappa < 1 and cfg.delta < 1):
        raise ParamError("kappa and delta must lie in (0, 1)")
    if cfg.c1 is not None and not 0 < cfg.c1 <= 1:
        raise ParamError("c1 must lie in (0, 1]")
    if cfg.c2 is not None and cfg.c1 is not None and cfg.c2 < cfg.c1:
        raise ParamError("c2 must be at least c1")
    if cfg.c2 is not None and not cfg.c2 > 0:
        raise ParamError("c2 must be positive")


# ---------------------------------------------------------------------------
# input / output


def read_cloud_csv(path: str) -> np.ndarray:
    """Parse a point CSV with header x0,...,x{n-1}; errors name line and column."""
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InputError(f"{path}: line 1, column 1: empty file") from None
        except (csv.Error, UnicodeDecodeError) as exc:
            raise InputError(f"{path}: line 1, column 1: {exc}") from None
        header = [h.strip() for h in header]
        for j, h in enumerate(header):
            if h != f"x{j}":
                raise InputError(f"{path}: line 1, column {j + 1}: expected header 'x{j}', got {h!r}")
        n = len(header)
        if n < 2:
            raise InputError(f"{path}: line 1, column 1: need at least two coordinates")
        rows = []
        try:
            for row in reader:
                line = reader.line_num
                if not row or all(not c.strip() for c in row):
                    continue
                if len(row) != n:
                    col = min(len(row), n) + 1
                    raise InputError(f"{path}: line {line}, column {col}: expected {n} fields, got {len(row)}")
                vals = []
                for j, c in enumerate(row):
                    try:
                        v = float(c)
                    except ValueError:
                        raise InputError(f"{path}: line {line}, column {j + 1}: not a number: {c!r}") from None
                    if not math.isfinite(v):
                        raise InputError(f"{path}: line {line}, column {j + 1}: non-finite value {c!r}")
                    vals.append(v)
                rows.append(vals)
        except (csv.Error, UnicodeDecodeError) as exc:
            raise InputError(f"{path}: line {reader.line_num}, column 1: {exc}") from None
    if not rows:
        raise InputError(f"{path}: line 2, column 1: no points")
    return np.array(rows, dtype=float)


def sidecar_path(path: str) -> Path:
    return Path(path).with_suffix(".json")


def load_cloud(cfg: RunConfig) -> PointCloud:
    if cfg.input is None:
        raise ParamError("an input CSV is required")
    pts = read_cloud_csv(cfg.input)
    h = cfg.resolution
    if h is None:
        side = sidecar_path(cfg.input)
        if not side.exists():
            raise ParamError("resolution unknown: pass --resolution or provide a sidecar JSON next to the CSV")
        try:
            meta = json.loads(side.read_text(encoding="utf-8"))
            h = float(meta["resolution"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{side}: line 1, column 1: no usable 'resolution' field ({exc})") from None
    _, first = np.unique(pts, axis=0, return_index=True)
    if len(first) != len(pts):
        dup = sorted(set(range(len(pts))) - set(first.tolist()))[0]
        raise InputError(f"{cfg.input}: line {dup + 2}, column 1: duplicate point")
    try:
        return PointCloud(pts, h)
    except ValueError as exc:
        raise ParamError(str(exc)) from None


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    if isinstance(v, (tuple, list)):
        return ";".join(_fmt(x) for x in v)
    return str(v)


def write_csv(path: Path, header: list, rows: list) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    return obj


def write_json(path: Path, payload: dict) -> None:
    text = json.dumps(_jsonable({"schema_version": SCHEMA_VERSION, **payload}), sort_keys=True, indent=1)
    path.write_text(text + "\n", encoding="utf-8")


def _config_dump(cfg: RunConfig) -> dict:
    """Run configuration for reports; the output location is left out so reruns compare equal."""
    return {k: v for k, v in asdict(cfg).items() if k != "out"}


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out or "conebeta_out")
    out.mkdir(parents=True, exist_ok=True)
    return out


def _echo_columns(cfg: RunConfig) -> tuple[list, list]:
    echo = cfg.echo()
    return [f"cfg_{k}" for k in echo], list(echo.values())


def _resolved_p_kind(cfg: RunConfig) -> tuple[float, str]:
    p = p_limit(cfg.d) if cfg.p is None else float(cfg.p)
    kind = cfg.kind or ("beta_inf" if not np.isfinite(p) else "beta_content")
    return p, kind


# ---------------------------------------------------------------------------
# commands


def cmd_synth(cfg: RunConfig) -> int:
    try:
        spec = SynthSpec(cfg.family, n=cfg.n, d=cfg.d, sample_count=cfg.samples, noise=cfg.noise, seed=cfg.seed,
                         alpha0=cfg.alpha0, depth=cfg.depth, angle=cfg.angle)
    except ValueError as exc:
        raise ParamError(str(exc)) from None
    E, truth = generate(spec)
    out = Path(cfg.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    write_csv(out, [f"x{j}" for j in range(E.dim)], E.points.tolist())
    write_json(sidecar_path(str(out)), {"resolution": E.resolution, "spec": asdict(spec), "points": E.size})
    truth_rows = [[i, bool(c), float(a)] for i, (c, a) in enumerate(zip(truth.cone, truth.paraboloid_max))]
    write_csv(out.with_suffix(".truth.csv"), ["point", "cone", "paraboloid_max_alpha"], truth_rows)
    print(f"wrote {E.size} points (resolution {E.resolution:.6g}) to {out}")
    return EXIT_OK


_ANALYZE_STATE: dict = {}


def _analyze_init(E, cfg):
    _ANALYZE_STATE["E"], _ANALYZE_STATE["cfg"] = E, cfg


def _analyze_task(i):
    E, cfg = _ANALYZE_STATE["E"], _ANALYZE_STATE["cfg"]
    p, kind = _resolved_p_kind(cfg)
    th = SquareThresholds(ratio=cfg.ratio, floor=cfg.floor)
    try:
        prof = beta_profile(E, E.points[i], cfg.d, p, kind, cfg.base, cfg.k_lo, cfg.k_hi, cfg.seed, cfg.c1, cfg.c2)
        return i, prof, {a: square_function(prof, a, th) for a in cfg.alphas}, None
    except Exception as exc:  # reported per point
        return i, None, None, f"{type(exc).__name__}: {exc}"


def _selected_points(cfg: RunConfig, E: PointCloud) -> list:
    if cfg.points is None:
        return list(range(E.size))
    bad = [i for i in cfg.points if not 0 <= i < E.size]
    if bad:
        raise ParamError(f"point indices out of range: {bad[:5]}")
    return list(cfg.points)


def _fix_scales(cfg: RunConfig, E: PointCloud) -> None:
    """Resolve default p, kind and scale range in place so reports echo the values used."""
    cfg.p, cfg.kind = _resolved_p_kind(cfg)
    if cfg.k_hi is None:
        try:
            cfg.k_lo, cfg.k_hi = scale_range(E, cfg.base, cfg.k_lo)
        except ValueError as exc:
            raise ParamError(str(exc)) from None
    elif cfg.base ** (-cfg.k_hi) < E.r_min * (1 - 1e-12):
        raise ParamError(f"finest scale base^-k_hi = {cfg.base ** (-cfg.k_hi):.3g} is below r_min = 4h = {E.r_min:.3g}")


def cmd_analyze(cfg: RunConfig) -> int:
    E = load_cloud(cfg)
    _fix_scales(cfg, E)
    if cfg.p > p_limit(cfg.d):
        # classify warns through ClassifyParams; analyze builds profiles directly
        warnings.warn(f"p = {cfg.p:g} exceeds p(d) = {p_limit(cfg.d):g}; proceeding because force is set")
    idx = _selected_points(cfg, E)
    results = ordered_map(_analyze_task, idx, worker_count(), _analyze_init, (E, cfg))
    out = _out_dir(cfg)
    echo_h, echo_v = _echo_columns(cfg)
    header = ["schema_version", "point", "alpha", "k", "r_k", "beta", "increment", "partial_sum", "verdict",
              "error"] + echo_h
    rows, points, errors = [], [], []
    for i, prof, squares, err in results:
        if err is not None:
            rows.append([SCHEMA_VERSION, i, None, None, None, None, None, None, None, err] + echo_v)
            errors.append({"point": i, "error": err})
            continue
        entry = {"point": i, "betas": prof.betas, "monotonicity_violations": prof.monotonicity_violations,
                 "square_functions": {}}
        for a, sq in squares.items():
            for j, k in enumerate(prof.ks):
                rows.append([SCHEMA_VERSION, i, a, int(k), prof.scales[j], prof.betas[j], sq.increments[j],
                             sq.partial_sums[j], sq.verdict, None] + echo_v)
            entry["square_functions"][f"{a:g}"] = {"verdict": sq.verdict, "total": sq.total,
                                                   "tail_slope": sq.tail_slope, "ratio": sq.ratio,
                                                   "tail_start": sq.tail_start}
        points.append(entry)
    write_csv(out / "profiles.csv", header, rows)
    verdicts = {f"{a:g}": {v: sum(1 for e in points if e["square_functions"][f"{a:g}"]["verdict"] == v)
                           for v in ("summable", "divergent", "indeterminate")} for a in cfg.alphas}
    write_json(out / "analyze.json", {"command": "analyze", "config": _config_dump(cfg), "points": points,
                                      "errors": errors, "summary": verdicts})
    print(f"analyzed {len(points)} points ({len(errors)} errors); verdict counts {verdicts}")
    return EXIT_OK if not errors else EXIT_FAILED


def cmd_classify(cfg: RunConfig) -> int:
    E = load_cloud(cfg)
    _fix_scales(cfg, E)
    idx = _selected_points(cfg, E)
    params = ClassifyParams(d=cfg.d, p=cfg.p, kind=cfg.kind, alphas=tuple(cfg.alphas), base=cfg.base,
                            k_lo=cfg.k_lo, k_hi=cfg.k_hi,
                            thresholds=SquareThresholds(ratio=cfg.ratio, floor=cfg.floor),
                            lambdas=tuple(cfg.lambdas), seed=cfg.seed, force=cfg.force, c1=cfg.c1, c2=cfg.c2)
    report = classify_points(E, params, idx)
    alphas = report.params.alphas
    out = _out_dir(cfg)
    echo_h, echo_v = _echo_columns(cfg)
    per_alpha = ["verdict", "sum", "ratio", "cert_lambda", "cert_score", "paraboloid", "agree"]
    header = (["schema_version", "point"] + [f"x{j}" for j in range(E.dim)] + ["cone"]
              + [f"{c}_a{a:g}" for a in alphas for c in per_alpha] + ["error"] + echo_h)
    by_index = {lab.index: lab for lab in report.labels}
    errs = dict(report.errors)
    rows, nested = [], []
    for i in idx:
        lab = by_index.get(i)
        row = [SCHEMA_VERSION, i] + E.points[i].tolist()
        if lab is None:
            rows.append(row + [None] * (1 + len(per_alpha) * len(alphas)) + [errs.get(i, "unknown error")] + echo_v)
            continue
        row.append(lab.verdicts["cone"])
        entry = {"point": i, "cone": lab.verdicts["cone"], "alphas": {}}
        for a in alphas:
            sq, cert = lab.squares[a], lab.certificates[a]
            row += [sq.verdict, sq.total, sq.ratio, cert.aperture if cert else None, cert.score if cert else None,
                    lab.verdicts["paraboloid"][a], lab.agreement[a]]
            entry["alphas"][f"{a:g}"] = {
                "square_function": sq.verdict, "partial_sums": sq.partial_sums, "ratio": sq.ratio,
                "certificate": None if cert is None else {
                    "aperture": cert.aperture, "radius": cert.radius, "score": cert.score,
                    "plane_basis": cert.plane.basis, "plane_offset": cert.plane.offset},
                "paraboloid": lab.verdicts["paraboloid"][a], "agreement": lab.agreement[a]}
        rows.append(row + [None] + echo_v)
        nested.append(entry)
    write_csv(out / "labels.csv", header, rows)
    write_json(out / "classify.json", {"command": "classify", "config": _config_dump(cfg), "summary": report.summary,
                                       "points": nested,
                                       "errors": [{"point": i, "error": e} for i, e in report.errors]})
    s0 = report.summary.get("alpha=0", {})
    print(f"classified {len(report.labels)} points ({len(report.errors)} errors); "
          f"summable {s0.get('summable', 0):.3f}, divergent {s0.get('divergent', 0):.3f}, "
          f"certified {s0.get('certified', 0):.3f}, agreement {s0.get('agreement', 0):.3f}")
    return EXIT_OK if not report.errors else EXIT_FAILED


def cmd_cubes(cfg: RunConfig) -> int:
    from .nets_cubes import (build_cubes, build_nets, build_stopping_forest, christ_violations, forest_to_json,
                             packing_ratio, region_violations, tree_to_json)

    E = load_cloud(cfg)
    alpha = cfg.alphas[0] if cfg.alphas else 0.0
    try:
        tree = build_cubes(build_nets(E, rho=cfg.rho), c0=cfg.c0)
        forest = build_stopping_forest(tree, d=cfg.d, alpha=alpha, delta=cfg.delta, kappa=cfg.kappa, C1=cfg.C1,
                                       C2=cfg.C2, c1=cfg.c1, c2=cfg.c2, seed=cfg.seed)
    except ValueError as exc:
        raise ParamError(str(exc)) from None
    out = _out_dir(cfg)
    payload = {"command": "cubes", "config": _config_dump(cfg), "tree": tree_to_json(tree), "forest": forest_to_json(forest),
               "packing_ratio": packing_ratio(forest), "christ_violations": christ_violations(tree),
               "region_violations": region_violations(forest)}
    write_json(out / "cubes.json", payload)
    print(f"{len(tree.cubes)} cubes over {tree.depth + 1} levels (c0 = {tree.c0:.4g}); "
          f"{len(forest.regions)} regions; packing ratio {payload['packing_ratio']:.4g}")
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    from .suites import SUITES, monotonicity_suite

    names = list(cfg.suites) if cfg.suites else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ParamError(f"unknown suite(s) {unknown}; available: {', '.join(SUITES)}")
    results = []
    for name in names:
        if name == "monotonicity":
            res = monotonicity_suite(n_clouds=cfg.clouds, seed=cfg.seed)
        else:
            res = SUITES[name](seed=cfg.seed)
        results.append(res)
        status = "PASS" if res.passed else "FAIL"
        growth = ", ".join(f"{k} x{v:.3f}" for k, v in res.growth.items())
        print(f"{status:4}  {res.name:16} checks={res.checks:<6} violations={res.violations:<4} {growth}")
    if cfg.out:
        out = _out_dir(cfg)
        rows = [[SCHEMA_VERSION, r.name, r.passed, r.checks, r.violations] for r in results]
        write_csv(out / "verify.csv", ["schema_version", "suite", "passed", "checks", "violations"], rows)
        write_json(out / "verify.json", {"command": "verify", "config": _config_dump(cfg),
                                         "suites": [{k: v for k, v in r.as_dict().items() if k != "seconds"}
                                                    for r in results]})
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


COMMANDS = {"synth": cmd_synth, "analyze": cmd_analyze, "classify": cmd_classify, "cubes": cmd_cubes,
            "verify": cmd_verify}


def run(cfg: RunConfig) -> int:
    try:
        validate(cfg)
        return COMMANDS[cfg.command](cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ParamError as exc:
        print(f"error: invalid parameter: {exc}", file=sys.stderr)
        return EXIT_PARAM


# ---------------------------------------------------------------------------
# argument parsing


def _floats(text: str) -> tuple:
    try:
        return tuple(float(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _ints(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="conebeta", description="Beta-number analysis of point clouds.")
    parser.add_argument("--version", action="version", version=f"conebeta {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def analysis_args(sp):
        sp.add_argument("input", help="CSV with header x0,...,x{n-1}")
        sp.add_argument("--resolution", type=float, help="sample resolution h (else read from the sidecar JSON)")
        sp.add_argument("--out", help="output directory (default conebeta_out)")
        sp.add_argument("--d", type=int, default=1, help="dimension of the approximating planes")
        sp.add_argument("--p", type=float, help="exponent (default p(d))")
        sp.add_argument("--kind", choices=KINDS, help="beta variant (default beta_inf for p = inf, else beta_content)")
        sp.add_argument("--alpha", dest="alphas", type=_floats, default=(0.0,), help="comma-separated alphas")
        sp.add_argument("--base", type=float, default=10.0, help="scales are base^-k")
        sp.add_argument("--k-lo", dest="k_lo", type=int, default=0, help="coarsest scale index")
        sp.add_argument("--k-hi", dest="k_hi", type=int, help="finest scale index (default: last above 4h)")
        sp.add_argument("--points", type=_ints, help="comma-separated point indices (default all)")
        sp.add_argument("--lambdas", type=_floats, default=DEFAULT_LAMBDAS, help="cone apertures to certify")
        sp.add_argument("--ratio", type=float, default=SquareThresholds.ratio, help="summable decay ratio")
        sp.add_argument("--floor", type=float, default=SquareThresholds.floor, help="divergence floor")
        sp.add_argument("--c1", type=float, help="lower density constant of the modified content")
        sp.add_argument("--c2", type=float, help="upper density constant of the modified content")
        sp.add_argument("--seed", type=int, default=0, help="seed for optimizer restarts")
        sp.add_argument("--force", action="store_true", help="allow p > p(d)")

    s = sub.add_parser("synth", help="generate a synthetic cloud")
    s.add_argument("--family", choices=FAMILIES, required=True)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--d", type=int, default=1)
    s.add_argument("--samples", type=int, help="sample count (family default if omitted)")
    s.add_argument("--noise", type=float, default=0.0, help="uniform perturbation radius")
    s.add_argument("--depth", type=int, default=4, help="recursion depth for cantor4 and koch")
    s.add_argument("--angle", type=float, default=math.pi / 3, help="koch bump angle in radians")
    s.add_argument("--alpha0", type=float, default=0.5, help="cusp exponent, y = |t|^(1 + alpha0)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True, help="output CSV path")

    analysis_args(sub.add_parser("analyze", help="beta profiles and square functions per point"))
    analysis_args(sub.add_parser("classify", help="cone / paraboloid labels per point"))

    c = sub.add_parser("cubes", help="cube tree and stopping forest")
    c.add_argument("input", help="CSV with header x0,...,x{n-1}")
    c.add_argument("--resolution", type=float, help="sample resolution h (else read from the sidecar JSON)")
    c.add_argument("--out", help="output directory (default conebeta_out)")
    c.add_argument("--d", type=int, default=1)
    c.add_argument("--alpha", dest="alphas", type=_floats, default=(0.0,))
    c.add_argument("--rho", type=float, default=0.5, help="net scale ratio")
    c.add_argument("--c0", type=float, help="inner-ball constant (default: measured)")
    c.add_argument("--C1", type=float, default=8.0, help="cube ball enlargement constant")
    c.add_argument("--C2", type=float, default=4.0, help="neighbour ball constant")
    c.add_argument("--kappa", type=float, default=1e-4, help="separation parameter for bad cubes")
    c.add_argument("--delta", type=float, default=0.1, help="stopping threshold on accumulated beta^2")
    c.add_argument("--c1", type=float, help="lower density constant of the modified content")
    c.add_argument("--c2", type=float, help="upper density constant of the modified content")
    c.add_argument("--seed", type=int, default=0, help="seed for optimizer restarts")

    v = sub.add_parser("verify", help="run the property suites")
    v.add_argument("--suite", dest="suites", action="append", help="suite name (repeatable; default all)")
    v.add_argument("--clouds", type=int, default=200, help="random clouds for the monotonicity suite")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", help="directory for verify.csv and verify.json")
    return parser


def parse_config(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    for key in ("alphas", "lambdas", "points", "suites"):
        if key in values:
            values[key] = tuple(values[key])
    return RunConfig(**values)


def main(argv=None) -> int:
    cfg = parse_config(argv)
    return run(cfg)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
