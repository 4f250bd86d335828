"""Command-line entry point: ``pencil-tns``.

Exit codes: 0 success (or a passing membership verdict), 1 failing verdict,
2 bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .degeneration import CASES, verify_restriction
from .field.rational import DEFAULT_MODULUS, check_modulus, to_rational
from .membership import (
    annihilator_dim,
    crl_profile_test,
    rank_drop_points,
    ruppert_rank,
    schofield_bridge_rank,
    tns_333_test,
)
from .network import (
    Network,
    TriangleConfig,
    ambient_dim,
    defect_triangle,
    dim_triangle,
    expected_dim,
    jacobian_rank_dim,
    normal_form_sample,
    param_count,
)
from .pencil import MatrixPencil, kronecker_decompose
from .tensor import DenseTensor

FILLS_NOTICE = "the variety fills the ambient space (the k2 <= k1 < m12 condition with equal side bonds fails)"


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    modulus: int = DEFAULT_MODULUS
    output: Optional[str] = None
    format: str = "json"


def _load_json(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _load_tensor(path: str) -> DenseTensor:
    obj = _load_json(path)
    try:
        if isinstance(obj, dict) and "A" in obj:
            return MatrixPencil.from_json(obj).to_tensor()
        return DenseTensor.from_json(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: invalid tensor: {exc}") from exc


def _load_pencil(path: str) -> MatrixPencil:
    obj = _load_json(path)
    try:
        return MatrixPencil.from_json(obj)
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{path}: invalid pencil: {exc}") from exc


def _config(args) -> TriangleConfig:
    try:
        return TriangleConfig(args.m, args.m12, args.k1, args.k2, args.m02)
    except ValueError as exc:
        raise InputError(f"unsatisfiable config: {exc}") from exc


# ---------------------------------------------------------------------------
# tns records


def oracle_dim(net: Network, seed: int, seeds: int, modulus: int) -> int:
    """Largest Jacobian rank over ``seeds`` consecutive seeds (a rank can only drop by bad luck)."""
    return max(jacobian_rank_dim(net, seed + s, modulus) for s in range(seeds))


def triangle_record(cfg: TriangleConfig, seed: int = 0, seeds: int = 5, modulus: int = DEFAULT_MODULUS) -> dict:
    net = cfg.network()
    formula = dim_triangle(cfg)
    oracle = oracle_dim(net, seed, seeds, modulus)
    expdim = expected_dim(net)
    defect, fiber = defect_triangle(cfg)
    return {
        "config": cfg.to_json(),
        "n": [2, cfg.n1, cfg.n2],
        "formula": formula,
        "oracle": oracle,
        "expdim": expdim,
        "defect": defect,
        "fiber_defect": fiber,
        "agree": formula == oracle and defect == expdim - oracle,
    }


def _record_task(task):
    return triangle_record(*task)


def sweep_configs(m_max: int, m12_max: int, m_min: int = 2, m12_min: int = 2) -> List[TriangleConfig]:
    out = []
    for m in range(m_min, m_max + 1):
        for m12 in range(m12_min, m12_max + 1):
            for k1 in range(m12 + 1):
                for k2 in range(k1 + 1):
                    out.append(TriangleConfig(m, m12, k1, k2))
    return out


def worker_count() -> int:
    raw = os.environ.get("PENCIL_TNS_THREADS", "")
    try:
        cap = int(raw) if raw else 1
    except ValueError:
        raise InputError(f"PENCIL_TNS_THREADS must be an integer, got {raw!r}")
    return max(1, min(cap, os.cpu_count() or 1))


def run_sweep(configs: List[TriangleConfig], seed: int, seeds: int, modulus: int) -> List[dict]:
    tasks = [(c, seed, seeds, modulus) for c in configs]
    workers = worker_count()
    if workers == 1:
        return [_record_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, independent of completion order
        return list(pool.map(_record_task, tasks))


def cmd_tns(args, rc: RunConfig):
    if args.network:
        if args.action not in ("oracle", "dim"):
            raise InputError("--network is supported for 'oracle' and 'dim' only")
        try:
            net = Network.from_json(_load_json(args.network))
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        oracle = oracle_dim(net, rc.seed, args.seeds, rc.modulus)
        exp = expected_dim(net)
        return {
            "network": net.to_json(),
            "oracle": oracle,
            "expdim": exp,
            "param_count": param_count(net),
            "ambient": ambient_dim(net),
            "defect": exp - oracle,
        }, 0
    if args.action == "sweep":
        configs = sweep_configs(args.m_max, args.m12_max)
        records = run_sweep(configs, rc.seed, args.seeds, rc.modulus)
        return {"records": records, "all_agree": all(r["agree"] for r in records)}, 0
    cfg = _config(args)
    if args.action == "dim":
        out = {"config": cfg.to_json(), "n": [2, cfg.n1, cfg.n2], "dim": dim_triangle(cfg), "fills": not cfg.star()}
        if not cfg.star():
            out["notice"] = FILLS_NOTICE
        return out, 0
    if args.action == "defect":
        defect, fiber = defect_triangle(cfg)
        return {"config": cfg.to_json(), "defect": defect, "fiber_defect": fiber, "expdim": expected_dim(cfg.network())}, 0
    if args.action == "oracle":
        return triangle_record(cfg, rc.seed, args.seeds, rc.modulus), 0
    if args.action == "sample":
        try:
            return normal_form_sample(cfg, rc.seed).to_json(), 0
        except ValueError as exc:
            raise InputError(str(exc)) from exc
    raise InputError(f"unknown tns action {args.action!r}")


# ---------------------------------------------------------------------------
# other commands


def cmd_kronecker(args, rc: RunConfig):
    P = _load_pencil(args.file)
    form = kronecker_decompose(P)
    again = kronecker_decompose(form.realize())
    return {
        "form": form.to_json(),
        "normal_rank": P.normal_rank(),
        "reconstruction": {"realized_shape": [form.n1, form.n2], "redecomposes_identically": again == form},
    }, 0


def cmd_member(args, rc: RunConfig):
    test = args.test
    if test == "ruppert":
        obj = _load_json(args.file)
        coeffs = obj.get("cubic") if isinstance(obj, dict) else obj
        if not isinstance(coeffs, list) or len(coeffs) != 10:
            raise InputError(f"{args.file}: expected a list of 10 cubic coefficients (or {{'cubic': [...]}})")
        try:
            f = [to_rational(c) for c in coeffs]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InputError(f"{args.file}: bad coefficient: {exc}") from exc
        rk = ruppert_rank(f)
        return {"test": "ruppert", "verdict": "pass" if rk < 8 else "fail", "certificate": {"ruppert_rank": rk}}, (0 if rk < 8 else 1)
    T = _load_tensor(args.file)
    try:
        if test == "crl":
            cfg = _config(args)
            kappas = [args.kappa] if args.kappa is not None else list(range(cfg.k1, cfg.m12 - 1))
            if not kappas:
                raise InputError("no admissible kappa for this config (need k1 <= m12 - 2)")
            verdicts = [crl_profile_test(MatrixPencil.from_tensor(T), cfg, k, seed=rc.seed) for k in kappas]
            ok = all(verdicts)
            return {"test": "crl", "verdict": "pass" if ok else "fail", "certificate": {"per_kappa": [v.certificate for v in verdicts]}}, (0 if ok else 1)
        if test == "rankdrop":
            res = rank_drop_points(MatrixPencil.from_tensor(T), args.r)
            ok = args.min_count is None or res.count >= args.min_count
            return {"test": "rankdrop", "verdict": "pass" if ok else "fail", "certificate": res.to_json()}, (0 if ok else 1)
        if test == "tns333":
            v = tns_333_test(T)
            return v.to_json(), (0 if v else 1)
        if test == "schofield":
            ranks = [schofield_bridge_rank(T, args.q, rc.seed + s) for s in range(args.samples)]
            ok = max(ranks) < 12 * args.q
            return {"test": "schofield", "verdict": "pass" if ok else "fail", "certificate": {"bridge_ranks": ranks}}, (0 if ok else 1)
        if test == "ann":
            acting = args.acting if args.acting else list(range(T.order))
            d = annihilator_dim(T, acting)
            return {"test": "ann", "verdict": "pass", "certificate": {"acting": acting, "dim": d}}, 0
    except ArithmeticError as exc:
        raise InputError(str(exc)) from exc
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    raise InputError(f"unknown test {test!r}")


def cmd_degenerate(args, rc: RunConfig):
    if args.case == "restriction":
        try:
            lam = to_rational(args.lam)
            rep = verify_restriction(lam)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(str(exc)) from exc
    else:
        rep = CASES[args.case]()
    return rep.to_json(), (0 if rep.equal else 1)


# ---------------------------------------------------------------------------
# output


def _table(obj) -> str:
    if isinstance(obj, dict) and "records" in obj:
        rows = obj["records"]
        cols = ["config", "n", "formula", "oracle", "expdim", "defect", "fiber_defect", "agree"]
        lines = ["\t".join(cols)]
        for r in rows:
            cfg = r["config"]
            key = f"({cfg['m']},{cfg['m12']},{cfg['k1']},{cfg['k2']})"
            lines.append("\t".join([key] + [str(r[c]) for c in cols[1:]]))
        lines.append(f"all_agree\t{obj['all_agree']}")
        return "\n".join(lines) + "\n"
    if isinstance(obj, dict):
        return "".join(f"{k}\t{json.dumps(v, sort_keys=True)}\n" for k, v in obj.items())
    return json.dumps(obj, sort_keys=True) + "\n"


def render(obj, fmt: str) -> str:
    if fmt == "table":
        return _table(obj)
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _add_config_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("-m", type=int, required=required, help="bond dimension of the edges at vertex 0")
    p.add_argument("--m12", "-m12", type=int, required=required)
    p.add_argument("--k1", "-k1", type=int, default=0)
    p.add_argument("--k2", "-k2", type=int, default=0)
    p.add_argument("--m02", "-m02", type=int, default=None, help="bond on edge (0,2) when it differs from m")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--modulus", type=int, default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="pencil-tns", description="Matrix pencils and triangular tensor network varieties.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    parser.add_argument("--format", choices=("json", "table"), default="json")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    pk = sub.add_parser("kronecker", parents=[common], help="Kronecker invariants of a pencil file")
    pk.add_argument("file")

    pt = sub.add_parser("tns", parents=[common], help="dimension data of triangular networks")
    pt.add_argument("action", choices=("dim", "defect", "sample", "oracle", "sweep"))
    _add_config_flags(pt, required=False)
    pt.add_argument("--network", default=None, help="network JSON file (oracle/dim)")
    pt.add_argument("--seeds", type=int, default=5, help="number of seeds for the Jacobian oracle")
    pt.add_argument("--m-max", type=int, default=3)
    pt.add_argument("--m12-max", type=int, default=3)

    pm = sub.add_parser("member", parents=[common], help="membership screening of a tensor file")
    pm.add_argument("test", choices=("crl", "rankdrop", "ruppert", "tns333", "schofield", "ann"))
    pm.add_argument("file")
    _add_config_flags(pm, required=False)
    pm.add_argument("--kappa", type=int, default=None)
    pm.add_argument("-r", type=int, default=None, help="rank threshold for rankdrop")
    pm.add_argument("--min-count", type=int, default=None, help="rankdrop passes when at least this many points")
    pm.add_argument("-q", type=int, default=1)
    pm.add_argument("--samples", type=int, default=3, help="number of random S for schofield")
    pm.add_argument("--acting", type=int, nargs="*", default=None)

    pd = sub.add_parser("degenerate", parents=[common], help="verify explicit degenerations")
    pd.add_argument("verb", choices=("verify",))
    pd.add_argument("case", choices=("iii2", "iv2", "zero2", "restriction"))
    pd.add_argument("--lambda", dest="lam", default="0")
    return parser


def _validate(args) -> None:
    if args.command in ("tns", "member"):
        needs_cfg = (args.command == "tns" and args.action in ("dim", "defect", "sample", "oracle") and not args.network) or (
            args.command == "member" and args.test == "crl"
        )
        if needs_cfg and (args.m is None or args.m12 is None):
            raise InputError("this command needs -m and --m12")
    if args.command == "member" and args.test == "rankdrop" and args.r is None:
        raise InputError("rankdrop needs -r")


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    rc = RunConfig(args.seed, args.modulus, args.out, args.format)
    handlers = {"kronecker": cmd_kronecker, "tns": cmd_tns, "member": cmd_member, "degenerate": cmd_degenerate}
    try:
        check_modulus(rc.modulus)
        _validate(args)
        obj, code = handlers[args.command](args, rc)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(obj, rc.format)
    if rc.output:
        with open(rc.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
