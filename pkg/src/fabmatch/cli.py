"""Command-line interface: ``fabmatch {match,geodesic,distmat,mds,synth}``.

Settings come from three layers: command-line flags override an optional
``--config`` file of ``key=value`` lines (keys are the long flag names
without dashes), which overrides the built-in defaults.

Exit codes: 0 success, 1 I/O error, 2 invalid configuration or input,
3 solver trouble (a line-search failure, or fewer than 90% of the pairs
of a distance matrix converging).
"""
import argparse
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import io, shapes, svg
from .analysis import classical_mds, kmeans_silhouette, pairwise_distances
from .curves import resample_uniform
from .errors import FabmatchError, ZeroCrossing
from .exact import ExactMatchConfig, exact_distance
from .relaxed import RelaxedConfig, relaxed_match
from .transform import geodesic
from .varifold import VarifoldKernel

log = logging.getLogger("fabmatch")

EXIT_IO, EXIT_CONFIG, EXIT_SOLVER = 1, 2, 3


class ConfigError(ValueError):
    pass


def _flag(text):
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


# shared settings: name -> (type, default)
SETTINGS = {
    "a": (float, 1.0),
    "b": (float, 0.5),
    "lambda": (float, 40.0),
    "kernel-dir": (str, "current"),
    "sigma-pos": (float, None),
    "sigma-dir": (float, 0.5),
    "rotations": (_flag, False),
    "rotation-grid": (int, 64),
    "seam-search": (_flag, False),
    "max-slope-step": (int, 4),
    "exact": (_flag, False),
    "n": (int, 100),
    "seed": (int, 0),
    "threads": (int, None),
    "max-iter": (int, 500),
    "grad-tol": (float, 1e-6),
    "init": (str, "source"),
}


def read_config(path):
    """Parse a ``key=value`` file; blank lines and ``#`` comments are ignored."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("_", "-")
            if key not in SETTINGS:
                raise ConfigError(f"{path}:{lineno}: unknown setting {key!r}")
            try:
                out[key] = SETTINGS[key][0](value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from None
    return out


def resolve(args):
    """Merge flags, config file and defaults into one settings dict."""
    from_file = read_config(args.config) if args.config else {}
    merged = {}
    for key, (_, default) in SETTINGS.items():
        flag = getattr(args, key.replace("-", "_"), None)
        if flag is not None:
            merged[key] = flag
        elif key in from_file:
            merged[key] = from_file[key]
        else:
            merged[key] = default
    if merged["threads"] is None:
        merged["threads"] = os.cpu_count() or 1
    if merged["n"] < 0:
        raise ConfigError("--n must be >= 0")
    return merged


def kernel_from(s):
    return VarifoldKernel(sigma_pos=s["sigma-pos"], direction=s["kernel-dir"], sigma_dir=s["sigma-dir"])


def relaxed_config(s):
    return RelaxedConfig(
        a=s["a"], b=s["b"], lam=s["lambda"], kernel=kernel_from(s), optimize_rotation=s["rotations"],
        init=s["init"], max_iter=s["max-iter"], grad_tol=s["grad-tol"],
    )


def exact_config(s):
    return ExactMatchConfig(
        a=s["a"], b=s["b"], max_slope_step=s["max-slope-step"], rotation_search=s["rotations"],
        rotation_grid=s["rotation-grid"], seam_search=s["seam-search"], threads=s["threads"],
    )


def prepare(curve, s):
    """Resample to the working vertex count (``--n 0`` keeps the input)."""
    return resample_uniform(curve, s["n"]) if s["n"] else curve


def _settings_record(s):
    return {k: v for k, v in s.items() if k != "threads"}


def run_match(source, target, s):
    c0, c1 = prepare(source, s), prepare(target, s)
    if s["exact"]:
        return c0, c1, exact_distance(c0, c1, exact_config(s))
    return c0, c1, relaxed_match(c0, c1, relaxed_config(s))


def cmd_match(args):
    s = resolve(args)
    source, target = io.read_curve(args.source), io.read_curve(args.target)
    c0, c1, res = run_match(source, target, s)
    record = res.to_dict()
    record["mode"] = "exact" if s["exact"] else "relaxed"
    record["settings"] = _settings_record(s)
    io.write_json(args.out, record)
    if args.svg:
        shown = res.end_curve.rotated(res.rotation) if not s["exact"] else res.end_curve
        svg.write_svg(args.svg, svg.curves_svg([c0, c1, shown], labels=["source", "target", "end curve"]))
    print(f"{res.elastic_distance:.6g}")
    return EXIT_SOLVER if res.termination == "line_search_failure" else 0


def cmd_geodesic(args):
    s = resolve(args)
    if args.panels < 2:
        raise ConfigError("--panels must be at least 2")
    source, target = io.read_curve(args.source), io.read_curve(args.target)
    c0, c1, res = run_match(source, target, s)
    ts = [k / (args.panels - 1) for k in range(args.panels)]
    panels, shown = [], []
    for t in ts:
        try:
            (ct,) = geodesic(c0, res.end_curve, s["a"], s["b"], [t])
        except ZeroCrossing as exc:
            log.warning("panel t=%g: %s", t, exc)
            panels.append({"t": t, "error": str(exc)})
            continue
        panels.append({"t": t, **io.curve_to_dict(ct)})
        shown.append((t, ct))
    record = {
        "elastic_distance": res.elastic_distance,
        "termination": res.termination,
        "rotation": res.rotation,
        "panels": panels,
        "settings": _settings_record(s),
    }
    io.write_json(args.out, record)
    if args.svg and shown:
        svg.write_svg(args.svg, svg.panels_svg([c for _, c in shown], [f"t = {t:.2f}" for t, _ in shown]))
    print(f"{res.elastic_distance:.6g}")
    return EXIT_SOLVER if res.termination == "line_search_failure" else 0


def _curve_files(directory):
    files = sorted(p for p in Path(directory).iterdir() if p.suffix.lower() in (".json", ".csv"))
    if len(files) < 2:
        raise ConfigError(f"{directory}: need at least two curve files")
    return files


def cmd_distmat(args):
    s = resolve(args)
    files = _curve_files(args.directory)
    curves = [prepare(io.read_curve(p), s) for p in files]
    mode = "exact" if s["exact"] else "relaxed"
    cfg = exact_config(s) if s["exact"] else relaxed_config(s)
    if s["exact"]:
        # pairs already run in parallel; keep each pair single-threaded
        cfg = ExactMatchConfig(**{**cfg.__dict__, "threads": 1})
    dm = pairwise_distances(curves, mode, cfg, labels=[p.stem for p in files], threads=s["threads"])
    io.write_matrix_csv(args.out, dm.labels, dm.values)
    n_pairs = len(files) * (len(files) - 1) // 2
    ok = n_pairs - len(dm.failures)
    if dm.failures:
        print(f"{ok}/{n_pairs} pairs converged", file=sys.stderr)
    return 0 if ok >= 0.9 * n_pairs else EXIT_SOLVER


def _classes_for(labels, path):
    got = io.read_labels(path)
    if isinstance(got, dict):
        missing = [lab for lab in labels if lab not in got]
        if missing:
            raise ConfigError(f"{path}: no class for {missing[0]!r}")
        return [got[lab] for lab in labels]
    if len(got) != len(labels):
        raise ConfigError(f"{path}: expected {len(labels)} class lines")
    return got


def cmd_mds(args):
    s = resolve(args)
    labels, values = io.read_matrix_csv(args.matrix)
    coords = classical_mds(values, args.dim)
    io.write_embedding_csv(args.out, labels, coords)
    classes = _classes_for(labels, args.labels) if args.labels else None
    if args.svg:
        svg.write_svg(args.svg, svg.scatter_svg(coords, labels, classes))
    if args.silhouette:
        score, _ = kmeans_silhouette(coords, args.silhouette, seed=s["seed"])
        print(f"silhouette {score:.6g}")
    return 0


def _generator_params(args):
    params = {}
    for key in ("radius", "e", "major", "w", "h", "r", "neck", "length", "height", "k", "amp"):
        value = getattr(args, key)
        if value is not None:
            params[key] = value
    return params


def cmd_synth(args):
    s = resolve(args)
    name = args.generator
    if name != "appendage" and name not in shapes.GENERATORS:
        raise ConfigError(f"unknown generator {name!r}; choose from {sorted(shapes.GENERATORS) + ['appendage']}")
    if name == "appendage" and args.base not in shapes.GENERATORS:
        raise ConfigError(f"unknown base generator {args.base!r}")
    rng = np.random.default_rng(s["seed"])
    n = s["n"] or 100
    made = []
    for k in range(args.count):
        base = args.base if name == "appendage" else name
        # the spike adds two vertices; the base leaves room so the result has n
        base_n = n - 2 if name == "appendage" else n
        curve = shapes.synthesize(base, n=base_n, rng=rng, jitter=args.jitter,
                                  rotation_jitter=args.rotation_jitter, **_generator_params(args))
        if name == "appendage":
            curve = shapes.appendage(curve, eps=args.eps)
        if args.noise:
            curve = shapes.noisy(curve, args.noise, seed=s["seed"] * 100003 + k)
        made.append(curve)
    out = Path(args.out or f"{name}.json")
    if args.count == 1 and out.suffix.lower() == ".json":
        io.write_curve(out, made[0])
    else:
        out.mkdir(parents=True, exist_ok=True)
        for k, curve in enumerate(made):
            io.write_curve(out / f"{name}-{k:03d}.json", curve)
    return 0


def _shared(parser):
    g = parser.add_argument_group("shared settings")
    g.add_argument("--config", help="key=value settings file")
    g.add_argument("--a", type=float, help="bending weight (default 1)")
    g.add_argument("--b", type=float, help="stretching weight (default 0.5)")
    g.add_argument("--lambda", dest="lambda", type=float, help="varifold penalty weight (default 40)")
    g.add_argument("--kernel-dir", choices=["current", "binet", "oriented-gaussian"])
    g.add_argument("--sigma-pos", type=float, help="position bandwidth (default 0.2 x target bbox diagonal)")
    g.add_argument("--sigma-dir", type=float)
    g.add_argument("--rotations", action="store_const", const=True,
                   help="quotient out rotations (angle optimized or searched on a grid)")
    g.add_argument("--rotation-grid", type=int)
    g.add_argument("--seam-search", action="store_const", const=True,
                   help="exact mode: try every starting vertex of a closed target")
    g.add_argument("--max-slope-step", type=int)
    g.add_argument("--exact", action="store_const", const=True, help="dynamic programming instead of relaxed")
    g.add_argument("--n", type=int, help="working vertex count, 0 keeps inputs (default 100)")
    g.add_argument("--seed", type=int)
    g.add_argument("--threads", type=int)
    g.add_argument("--max-iter", type=int)
    g.add_argument("--grad-tol", type=float)
    g.add_argument("--init", choices=["source", "target"])


def build_parser():
    parser = argparse.ArgumentParser(prog="fabmatch", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("match", help="elastic distance between two curves")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out", default="match.json")
    p.add_argument("--svg")
    _shared(p)
    p.set_defaults(func=cmd_match)

    p = sub.add_parser("geodesic", help="snapshots along the geodesic to the matched end curve")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--panels", type=int, default=4)
    p.add_argument("--out", default="geodesic.json")
    p.add_argument("--svg")
    _shared(p)
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("distmat", help="pairwise distance matrix over a directory of curves")
    p.add_argument("directory")
    p.add_argument("--out", default="distances.csv")
    _shared(p)
    p.set_defaults(func=cmd_distmat)

    p = sub.add_parser("mds", help="classical MDS embedding of a distance matrix")
    p.add_argument("matrix")
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--labels", help="class labels: 'name,class' lines or one class per line")
    p.add_argument("--silhouette", type=int, metavar="K", help="print the k-means silhouette score")
    p.add_argument("--out", default="embedding.csv")
    p.add_argument("--svg")
    _shared(p)
    p.set_defaults(func=cmd_mds)

    p = sub.add_parser("synth", help="write synthetic curves")
    p.add_argument("generator", help="circle, ellipse, rounded-rectangle, dumbbell, star or appendage")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--rotation-jitter", type=float, default=0.0)
    p.add_argument("--noise", type=float, default=0.0, help="Gaussian vertex noise amplitude")
    p.add_argument("--base", default="circle", help="base generator for appendage")
    p.add_argument("--eps", type=float, default=0.05, help="appendage spike length")
    for key, typ in (("radius", float), ("e", float), ("major", float), ("w", float), ("h", float),
                     ("r", float), ("neck", float), ("length", float), ("height", float), ("k", int),
                     ("amp", float)):
        p.add_argument(f"--{key}", type=typ)
    p.add_argument("--out")
    _shared(p)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, FabmatchError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
