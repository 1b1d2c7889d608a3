"""Command line interface: JSON spec ingestion and report emission.

Subcommands: validate, classify, weyl-report, snp-scan, family-sweep,
thermostat.  Reports are JSON on stdout with sorted keys; trajectories
and sweeps can additionally be written as CSV.  Exit codes: 0 success,
1 I/O failure, 2 invalid input, 3 inconclusive certificate.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from . import families, thermostat
from .config import DEFAULT_TOLS, default_seed
from .homogeneous import ReductiveSpace, p0
from .levicivita import classify_field, divergence
from .liealg import (InvalidAlgebraError, LieAlgebra, Metric, MetricLieAlgebra,
                     is_unimodular)
from .weyl import (INCONCLUSIVE, Certificate, CertifyConfig, WeylStructure,
                   certify_nonpositive, check_snp_sufficient_ow, check_W1,
                   check_W2, check_W4_W5, snp_scan)

SCHEMA_VERSION = 1


class InputError(ValueError):
    """Invalid specification content (exit code 2)."""


# -- spec ingestion -----------------------------------------------------


def _require(cond, msg):
    if not cond:
        raise InputError(msg)


def _build_constants(dim, entries):
    _require(isinstance(entries, list), "structure_constants must be a list")
    c = np.zeros((dim, dim, dim))
    provided = set()
    for rec in entries:
        _require(isinstance(rec, dict) and {"i", "j", "k", "value"} <= set(rec),
                 "each structure constant needs fields i, j, k, value")
        i, j, k, v = rec["i"], rec["j"], rec["k"], float(rec["value"])
        _require(all(isinstance(x, int) for x in (i, j, k)),
                 "structure constant indices must be integers")
        _require(0 <= i < dim and 0 <= j < dim and 0 <= k < dim,
                 f"structure constant index out of range: ({i},{j},{k})")
        _require(i != j, f"diagonal bracket entry ({i},{i},{k}) must vanish")
        c[i, j, k] += v
        provided.add((i, j, k))
    # mirrors are filled only where the user did not spell them out, so a
    # contradictory pair is caught by the antisymmetry check
    for (i, j, k) in provided:
        if (j, i, k) not in provided:
            c[j, i, k] = -c[i, j, k]
    return c


def _build_family(fam) -> MetricLieAlgebra:
    _require(isinstance(fam, dict) and "kind" in fam, "family needs a kind")
    kind = fam["kind"]
    params = fam.get("params", {})
    if kind == "milnor":
        lams = params.get("lambdas")
        _require(isinstance(lams, list) and len(lams) == 3,
                 "milnor family needs params.lambdas with three entries")
        return families.milnor(tuple(float(x) for x in lams))
    if kind == "solvable":
        mu = params.get("mu")
        _require(isinstance(mu, list) and len(mu) >= 1,
                 "solvable family needs params.mu")
        return families.solvable(tuple(float(x) for x in mu))
    if kind == "hyperbolic":
        n = params.get("n")
        _require(isinstance(n, int) and n >= 1, "hyperbolic family needs params.n >= 1")
        return families.hyperbolic(n)
    if kind == "direct_sum":
        summands = params.get("summands")
        _require(isinstance(summands, list) and len(summands) >= 2,
                 "direct_sum needs at least two summands")
        built = [_build_space(s) for s in summands]
        out = built[0]
        for nxt in built[1:]:
            out = families.direct_sum(out, nxt)
        return out
    if kind == "abelian":
        n = params.get("n")
        _require(isinstance(n, int) and n >= 1, "abelian family needs params.n >= 1")
        return families.abelian(n)
    raise InputError(f"unknown family kind {kind!r}")


def _build_space(doc) -> MetricLieAlgebra:
    has_constants = "structure_constants" in doc
    has_family = "family" in doc
    _require(has_constants != has_family,
             "exactly one of structure_constants or family must be present")
    if has_family:
        built = _build_family(doc["family"])
        if "metric" in doc and doc["metric"] != "identity":
            g = _parse_metric(doc["metric"], built.n)
            return MetricLieAlgebra(built.algebra, Metric(g))
        return built
    dim = doc.get("dimension")
    _require(isinstance(dim, int) and dim >= 1, "dimension must be a positive integer")
    c = _build_constants(dim, doc["structure_constants"])
    try:
        alg = LieAlgebra(c)
    except InvalidAlgebraError as err:
        raise InputError(str(err)) from err
    g = _parse_metric(doc.get("metric", "identity"), dim)
    try:
        return MetricLieAlgebra(alg, Metric(g))
    except ValueError as err:
        raise InputError(str(err)) from err


def _parse_metric(metric, dim):
    if metric == "identity" or metric is None:
        return np.eye(dim)
    arr = np.asarray(metric, dtype=float)
    _require(arr.shape == (dim, dim), f"metric must be {dim}x{dim}")
    return arr


def _parse_vector(text_or_list, dim, what="field"):
    if isinstance(text_or_list, str):
        try:
            vals = [float(x) for x in text_or_list.split(",")]
        except ValueError as err:
            raise InputError(f"cannot parse {what}: {err}") from err
    else:
        vals = [float(x) for x in text_or_list]
    _require(len(vals) == dim, f"{what} must have {dim} components")
    return np.array(vals)


def load_spec(path):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError:
        raise
    digest = hashlib.sha256(raw).hexdigest()
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as err:
        raise InputError(f"not valid JSON: {err}") from err
    _require(isinstance(doc, dict), "top level of the spec must be an object")
    return doc, digest


def normalized_spec(doc, space: MetricLieAlgebra):
    out = {"dimension": space.n}
    if "family" in doc:
        fam = doc["family"]
        params = {k: ([float(x) for x in v] if isinstance(v, list) else v)
                  for k, v in fam.get("params", {}).items()}
        out["family"] = {"kind": fam["kind"], "params": params}
    else:
        entries = []
        c = space.algebra.c
        for i in range(space.n):
            for j in range(i + 1, space.n):
                for k in range(space.n):
                    if c[i, j, k] != 0.0:
                        entries.append({"i": i, "j": j, "k": k,
                                        "value": float(c[i, j, k])})
        out["structure_constants"] = entries
    g = space.metric.g
    if np.array_equal(g, np.eye(space.n)):
        out["metric"] = "identity"
    else:
        out["metric"] = [[float(x) for x in row] for row in g]
    if "field" in doc:
        out["field"] = [float(x) for x in doc["field"]]
    if "homogeneous" in doc:
        out["homogeneous"] = doc["homogeneous"]
    return out


# -- report plumbing -----------------------------------------------------


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    return obj


def _certificate_dict(cert: Certificate):
    out = {
        "verdict": cert.verdict,
        "method": cert.method,
        "lambda_max": cert.lambda_max,
        "tol_cert": cert.tol_cert,
        "gamma": cert.gamma,
    }
    if cert.witness is not None:
        out["witness"] = {"X": list(cert.witness.X), "Y": list(cert.witness.Y),
                          "value": cert.witness_value}
    if cert.best_found is not None:
        out["best_found"] = cert.best_found
    if cert.note:
        out["note"] = cert.note
    return out


def _emit(report, command, digest, seed, t_start, stream=None):
    body = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "input_hash": digest,
        "seed": seed,
        "tolerances": {
            "tol_alg": DEFAULT_TOLS.tol_alg,
            "tol_pd": DEFAULT_TOLS.tol_pd,
            "tol_rank": DEFAULT_TOLS.tol_rank,
            "tol_cert": DEFAULT_TOLS.tol_cert,
        },
    }
    body.update(report)
    body["timing"] = {"wall_time_s": time.perf_counter() - t_start}
    print(json.dumps(_jsonable(body), indent=2, sort_keys=True), file=stream)


# -- subcommands ----------------------------------------------------------


def cmd_validate(args):
    t0 = time.perf_counter()
    doc, digest = load_spec(args.spec)
    space = _build_space(doc)
    uni, uni_res = is_unimodular(space)
    from .liealg import jacobi_residual
    report = {
        "valid": True,
        "dimension": space.n,
        "jacobi_residual": jacobi_residual(space.c),
        "metric_min_eigenvalue": float(np.linalg.eigvalsh(space.metric.g).min()),
        "unimodular": uni,
        "unimodular_residual": uni_res,
        "normalized_spec": normalized_spec(doc, space),
    }
    if "field" in doc:
        E = _parse_vector(doc["field"], space.n)
        report["field_norm"] = float(np.linalg.norm(E))
    if "homogeneous" in doc:
        hom = doc["homogeneous"]
        _require(isinstance(hom, dict) and "h_basis" in hom and "p_basis" in hom,
                 "homogeneous block needs h_basis and p_basis")
        try:
            rs = ReductiveSpace(
                LieAlgebra(np.array(space.c)),
                np.asarray(hom["h_basis"], dtype=float).reshape(-1, space.n),
                np.asarray(hom["p_basis"], dtype=float).reshape(-1, space.n),
                inner=np.asarray(hom["inner"], dtype=float) if "inner" in hom else None)
        except ValueError as err:
            raise InputError(f"homogeneous block invalid: {err}") from err
        report["homogeneous"] = {"dim_h": rs.dim_h, "dim_p": rs.dim_p,
                                 "dim_p0": int(p0(rs).shape[1])}
    _emit(report, "validate", digest, args.seed, t0)
    return 0


def cmd_classify(args):
    t0 = time.perf_counter()
    doc, digest = load_spec(args.spec)
    space = _build_space(doc)
    field = args.field if args.field is not None else doc.get("field")
    _require(field is not None, "classify needs a field (--field or spec field)")
    E = _parse_vector(field, space.n)
    _require(float(np.linalg.norm(E)) > 0.0, "field must be nonzero")

    cls = classify_field(space, E)
    W = WeylStructure(space, E, 1.0)
    w1 = check_W1(W)
    w2 = check_W2(W)
    ow = check_snp_sufficient_ow(W)
    report = {
        "field": list(E),
        "killing": {"value": cls.is_killing, "residual": cls.killing_residual,
                    "tolerance": DEFAULT_TOLS.tol_alg},
        "parallel": {"value": cls.is_parallel,
                     "commutator_residual": cls.commutator_residual,
                     "tolerance": DEFAULT_TOLS.tol_alg},
        "closed_form": {"value": cls.is_closed_form,
                        "tolerance": DEFAULT_TOLS.tol_alg},
        "divergence": divergence(space, E),
        "w1": {"value": w1.ok, "worst": w1.worst,
               "tolerance": DEFAULT_TOLS.tol_cert},
        "w2": {"value": w2.ok, "residual": w2.residual,
               "tolerance": DEFAULT_TOLS.tol_alg},
        "w3": {"value": True,
               "note": "left-invariant fields have constant length"},
        "ow_sufficient_snp": {"value": ow.ok, "min_eigenvalue": ow.min_eigenvalue,
                              "tolerance": DEFAULT_TOLS.tol_cert},
    }
    if space.n >= 3:
        w45 = check_W4_W5(W)
        report["w4_w5"] = {"w4": w45.w4, "w5": w45.w5,
                           "sup_value": w45.sup_value,
                           "decoupled_bound": w45.decoupled_bound,
                           "tolerance": DEFAULT_TOLS.tol_cert,
                           "note": "curvature term entered as strictly "
                                   "negative bound (sign fixed against the "
                                   "strict companion condition)"}
    else:
        report["w4_w5"] = {"skipped": "needs dimension >= 3"}
    _emit(report, "classify", digest, args.seed, t0)
    return 0


def cmd_weyl_report(args):
    t0 = time.perf_counter()
    doc, digest = load_spec(args.spec)
    space = _build_space(doc)
    field = args.field if args.field is not None else doc.get("field")
    _require(field is not None, "weyl-report needs a field (--field or spec field)")
    E = _parse_vector(field, space.n)
    W = WeylStructure(space, E, args.gamma)
    cert = certify_nonpositive(W, CertifyConfig(seed=args.seed))
    _emit({"gamma": args.gamma, "certificate": _certificate_dict(cert)},
          "weyl-report", digest, args.seed, t0)
    return 3 if cert.verdict == INCONCLUSIVE else 0


def cmd_snp_scan(args):
    t0 = time.perf_counter()
    doc, digest = load_spec(args.spec)
    space = _build_space(doc)
    field = args.field if args.field is not None else doc.get("field")
    _require(field is not None, "snp-scan needs a field (--field or spec field)")
    E = _parse_vector(field, space.n)
    _require(args.gamma_steps >= 1, "need at least one grid point")
    _require(0 < args.gamma_min < args.gamma_max, "need 0 < gamma-min < gamma-max")
    if args.spacing == "log":
        grid = np.geomspace(args.gamma_min, args.gamma_max, args.gamma_steps)
    else:
        grid = np.linspace(args.gamma_min, args.gamma_max, args.gamma_steps)
    W = WeylStructure(space, E, 1.0)
    scan = snp_scan(W, grid, CertifyConfig(seed=args.seed))
    report = {
        "grid": list(grid),
        "spacing": args.spacing,
        "gamma0": scan.gamma0,
        "inconclusive_gammas": scan.inconclusive,
        "entries": [{"gamma": float(g), "certificate": _certificate_dict(c)}
                    for g, c in scan.entries()],
    }
    _emit(report, "snp-scan", digest, args.seed, t0)
    return 3 if scan.inconclusive else 0


def _parse_grid(text, what="grid"):
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError as err:
        raise InputError(f"{what} must look like start:stop:count") from err
    _require(count >= 1, f"{what} needs at least one point")
    return np.linspace(start, stop, count)


def cmd_family_sweep(args):
    t0 = time.perf_counter()
    seed = args.seed
    cfg = CertifyConfig(seed=seed)
    records = []
    if args.kind == "solvable":
        _require(args.mu is not None, "solvable sweep needs --mu")
        mu = tuple(float(x) for x in args.mu.split(","))
        fam = families.SolvableFamily(mu)
        space = families.solvable(fam)
        grid = _parse_grid(args.grid, "--grid")
        for alpha in grid:
            E = np.zeros(space.n)
            E[0] = alpha
            rec = {"alpha": float(alpha)}
            if alpha == 0.0:
                rec["skipped"] = "zero field"
                records.append(rec)
                continue
            cert = certify_nonpositive(WeylStructure(space, E, 1.0), cfg)
            rec["certificate"] = _certificate_dict(cert)
            try:
                verdict = families.classify_axis_field(fam, float(alpha))
                rec["closed_form"] = {"non_positive": verdict.non_positive,
                                      "reason": verdict.reason}
                rec["agreement"] = (verdict.non_positive
                                    == (cert.verdict == "certified_non_positive"))
            except ValueError as err:
                rec["closed_form"] = {"skipped": str(err)}
            records.append(rec)
        body = {"kind": "solvable", "mu": list(fam.mu), "records": records}
    elif args.kind == "milnor":
        _require(args.field is not None, "milnor sweep needs --field")
        grid = _parse_grid(args.grid, "--grid")
        E3 = _parse_vector(args.field, 3)
        for l1 in grid:
            for l2 in grid:
                for l3 in grid:
                    space = families.milnor((float(l1), float(l2), float(l3)))
                    cert = certify_nonpositive(
                        WeylStructure(space, E3, args.gamma), cfg)
                    uni, _ = is_unimodular(space)
                    records.append({"lambdas": [float(l1), float(l2), float(l3)],
                                    "unimodular": uni,
                                    "verdict": cert.verdict,
                                    "lambda_max": cert.lambda_max})
        body = {"kind": "milnor", "gamma": args.gamma, "field": list(E3),
                "records": records}
    else:
        raise InputError(f"unknown sweep kind {args.kind!r}")
    _emit(body, "family-sweep", hashlib.sha256(b"").hexdigest(), seed, t0)
    return 0


def cmd_thermostat(args):
    t0 = time.perf_counter()
    doc, digest = load_spec(args.spec)
    space = _build_space(doc)
    field = args.field if args.field is not None else doc.get("field")
    E = _parse_vector(field, space.n) if field is not None else np.zeros(space.n)
    W = WeylStructure(space, E, args.gamma)
    v0 = _parse_vector(args.v0, space.n, what="--v0")
    _require(float(np.linalg.norm(v0)) > 0.0, "--v0 must be nonzero")
    try:
        cfg = thermostat.IntegratorConfig(dt=args.dt, steps=args.steps)
    except ValueError as err:
        raise InputError(str(err)) from err
    traj = thermostat.integrate(W, v0, cfg)
    coords = None
    if args.reconstruct is not None:
        try:
            coords = thermostat.reconstruct(W, traj, args.reconstruct)
        except ValueError as err:
            raise InputError(str(err)) from err
    report = {
        "dt": args.dt,
        "steps": args.steps,
        "gamma": args.gamma,
        "initial_energy": float(traj.energies[0]),
        "energy_drift": traj.energy_drift,
        "final_velocity": list(traj.velocities[-1]),
    }
    if coords is not None:
        report["model"] = args.reconstruct
        report["final_coordinates"] = list(coords[-1])
    if args.out:
        try:
            thermostat.write_csv(args.out, traj, coords)
        except OSError:
            raise
        report["csv"] = args.out
    _emit(report, "thermostat", digest, args.seed, t0)
    return 0


# -- entry point -----------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(
        prog="weylcurv",
        description="Curvature certification for homogeneous Weyl connections")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for deterministic searches "
                        "(default: WEYLCURV_SEED or 0)")
    sub = p.add_subparsers(dest="command", required=True)

    def spec_cmd(name, fn, **kwargs):
        q = sub.add_parser(name, **kwargs)
        q.add_argument("spec", help="JSON specification file")
        q.set_defaults(func=fn)
        return q

    spec_cmd("validate", cmd_validate, help="check a specification file")

    q = spec_cmd("classify", cmd_classify, help="classify a left-invariant field")
    q.add_argument("--field", help="comma separated components (overrides spec)")

    q = spec_cmd("weyl-report", cmd_weyl_report,
                 help="certify non-positivity for one stretch factor")
    q.add_argument("--field", help="comma separated components (overrides spec)")
    q.add_argument("--gamma", type=float, default=1.0)

    q = spec_cmd("snp-scan", cmd_snp_scan,
                 help="certify over a grid of stretch factors")
    q.add_argument("--field", help="comma separated components (overrides spec)")
    q.add_argument("--gamma-min", type=float, required=True)
    q.add_argument("--gamma-max", type=float, required=True)
    q.add_argument("--gamma-steps", type=int, required=True)
    q.add_argument("--spacing", choices=("linear", "log"), default="linear")

    q = sub.add_parser("family-sweep", help="sweep a parameter family")
    q.add_argument("--kind", choices=("milnor", "solvable"), required=True)
    q.add_argument("--grid", required=True, help="start:stop:count")
    q.add_argument("--mu", help="solvable eigenvalues, comma separated")
    q.add_argument("--field", help="field for milnor sweeps, comma separated")
    q.add_argument("--gamma", type=float, default=1.0)
    q.set_defaults(func=cmd_family_sweep)

    q = spec_cmd("thermostat", cmd_thermostat, help="integrate the thermostat flow")
    q.add_argument("--field", help="comma separated components (overrides spec)")
    q.add_argument("--v0", required=True, help="initial frame velocity")
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--steps", type=int, default=10_000)
    q.add_argument("--gamma", type=float, default=1.0)
    q.add_argument("--reconstruct", choices=(thermostat.SOL, thermostat.HYPERBOLIC))
    q.add_argument("--out", help="CSV output path")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()
    try:
        return args.func(args)
    except InputError as err:
        print(json.dumps({"error": {"type": "invalid_input", "message": str(err)}},
                         indent=2, sort_keys=True))
        return 2
    except (InvalidAlgebraError, ValueError) as err:
        print(json.dumps({"error": {"type": "invalid_input", "message": str(err)}},
                         indent=2, sort_keys=True))
        return 2
    except OSError as err:
        print(json.dumps({"error": {"type": "io", "message": str(err)}},
                         indent=2, sort_keys=True))
        return 1


if __name__ == "__main__":
    sys.exit(main())
