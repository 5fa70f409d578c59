"""
CMV 축소 도구 메인 실행 파일

python main.py <gen|reduce|eig|roots|check|bench|spy> [options]
exit codes: 0 성공, 1 입력/사용 오류, 2 검증 실패, 3 수렴 실패
"""
import argparse
import logging
import sys
from typing import Dict, List, Optional

import numpy as np

from config import Config
from linalg.errors import CMVError, ProfileError
from linalg.kernels import UNIT_ROUNDOFF, as_matrix, frobenius_norm
from linalg.matrix_io import (dumps_cmtx, parse_inline_coefficients, read_cmtx, read_polynomial,
                              write_cmtx, write_json_report, write_polynomial)
from mcp_server.server import CommandServer
from reduction.cmv import verify_cmv_like, verify_rank_pattern
from reduction.profile import infer_profile
from solvers.qr_iter import ShiftStrategy
from solvers.rootfind import MonicPolynomial, upper_givens_factor
from tools import bench_tool, generators, spy_tool
from workers import EigenWorker, ReduceWorker, RootsWorker

logger = logging.getLogger("cmv")

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VERIFY = 2
EXIT_NO_CONVERGENCE = 3


class UsageError(CMVError):
    """잘못된 인자 조합"""


def build_server() -> CommandServer:
    """워커와 도구를 등록한 CommandServer 생성"""
    server = CommandServer()
    server.register_worker("reduce", ReduceWorker())
    server.register_worker("eigen", EigenWorker())
    server.register_worker("roots", RootsWorker())
    server.register_tool("generators", generators)
    server.register_tool("spy", spy_tool)
    server.register_tool("bench", bench_tool)
    return server


def print_command_history(commands: List[Dict], stream=sys.stderr):
    """명령 히스토리를 테이블 형태로 출력"""
    print(f"{'ID':<4} {'To':<8} {'Command':<10} {'Status':<12}", file=stream)
    print("-" * 40, file=stream)
    for cmd in commands:
        status = cmd["status"]
        if status == "completed":
            status = f"✅ {status}"
        elif status == "failed":
            status = f"❌ {status}"
        else:
            status = f"⏳ {status}"
        print(f"{cmd['id']:<4} {cmd['to'][:7]:<8} {cmd['command'][:9]:<10} {status:<12}", file=stream)


def format_complex(value: complex) -> str:
    value = complex(value)
    return f"{value.real:.16g} {value.imag:.16g}"


def _fail(message: str, code: int) -> int:
    print(f"❌ {message}", file=sys.stderr)
    return code


def _failure_code(result: Dict) -> int:
    return EXIT_VERIFY if isinstance(result.get("exception"), ProfileError) else EXIT_INPUT


def load_matrix(args, server: CommandServer) -> np.ndarray:
    """--input CMTX 파일 또는 --gen 생성기 사양에서 행렬 읽기"""
    if bool(args.input) == bool(args.gen):
        raise UsageError("give exactly one of --input or --gen")
    if args.input:
        return read_cmtx(args.input)
    spec = generators.parse_generator(args.gen, seed=args.seed)
    called = server.call_tool("generators", "generate", spec=spec)
    if not called["success"]:
        raise called["exception"]
    return called["value"]


def _threshold(t: np.ndarray, tol_scale: Optional[float]) -> float:
    scale = Config.TOL_SCALE if tol_scale is None else tol_scale
    return scale * t.shape[0] * UNIT_ROUNDOFF * frobenius_norm(t)


def cmd_gen(args, server: CommandServer) -> int:
    spec = generators.parse_generator(args.gen, seed=args.seed)
    if args.poly:
        if spec.kind != "companion":
            raise UsageError("--poly only applies to companion generators")
        write_polynomial(args.poly, spec.params)
        if not args.output:
            return EXIT_OK
    u = generators.generate(spec)
    if args.output:
        write_cmtx(args.output, u)
    else:
        sys.stdout.write(dumps_cmtx(u))
    return EXIT_OK


def cmd_reduce(args, server: CommandServer) -> int:
    u = load_matrix(args, server)
    result = server.dispatch("reduce", "REDUCE", u=u, seed=args.seed, tol_scale=args.tol_scale)
    if not result["success"]:
        return _fail(result["error"], _failure_code(result))
    form = result["form"]
    if args.output:
        write_cmtx(args.output, form.t)
    if args.spy:
        spy_tool.spy_emit(form.t, result["threshold"], fmt=args.spy_format, path=args.spy)
    report = form.report.to_dict()
    report.update({"verified": result["verified"], "violations": result["violations"],
                   "profile": form.profile.to_dict()})
    if args.report:
        write_json_report(args.report, report)
    print(f"n={form.report.n} segments={len(form.profile.segments)} restarts={form.report.restarts} "
          f"residual={form.report.residual:.3e}")
    if not result["verified"]:
        for v in result["violations"]:
            print(f"violation {v}")
        return EXIT_VERIFY
    return EXIT_OK


def cmd_eig(args, server: CommandServer) -> int:
    u = load_matrix(args, server)
    result = server.dispatch("eigen", "EIG", u=u, seed=args.seed, shift=args.shift, max_steps=args.max_steps)
    if not result["success"]:
        return _fail(result["error"], _failure_code(result))
    eig = result["result"]
    for value in eig.eigenvalues:
        print(format_complex(value))
    report = eig.to_dict()
    report["reduction"] = result["form"].report.to_dict()
    if args.report:
        write_json_report(args.report, report)
    print(f"steps={eig.steps_total} deflations={len(eig.deflations)} converged={eig.converged}", file=sys.stderr)
    return EXIT_OK if eig.converged else EXIT_NO_CONVERGENCE


def cmd_roots(args, server: CommandServer) -> int:
    if bool(args.coeffs) == bool(args.poly):
        raise UsageError("give exactly one of --coeffs or --poly")
    coefficients = parse_inline_coefficients(args.coeffs) if args.coeffs else read_polynomial(args.poly)
    result = server.dispatch("roots", "ROOTS", polynomial=MonicPolynomial(tuple(coefficients)),
                             shift=args.shift, max_steps=args.max_steps, scale=args.scale, seed=args.seed)
    if not result["success"]:
        return _fail(result["error"], _failure_code(result))
    found = result["result"]
    for value in found.roots:
        print(format_complex(value))
    report = found.to_dict()
    if found.form is not None:
        # T S = H of the final unitary part
        factor = upper_givens_factor(found.form.t)
        report["upper_structure"] = factor.to_dict()
        if args.spy_h:
            spy_tool.spy_emit(factor.h, path=args.spy_h)
        if args.spy_s:
            spy_tool.spy_emit(factor.s, path=args.spy_s)
    if args.report:
        write_json_report(args.report, report)
    return EXIT_OK if found.converged else EXIT_NO_CONVERGENCE


def cmd_check(args, server: CommandServer) -> int:
    t = as_matrix(read_cmtx(args.input), "t")
    if t.shape[0] != t.shape[1]:
        raise UsageError(f"check needs a square matrix, got {t.shape}")
    threshold = _threshold(t, args.tol_scale)
    profile = infer_profile(t, threshold)
    ok, violations = verify_cmv_like(t, profile, threshold)
    rank_ok, rank_reports = verify_rank_pattern(t, threshold)
    for v in violations:
        print(f"{v.kind} {v.index} {v.value:.3e}")
    for r in rank_reports:
        if r["status"] == "fail":
            print(f"rank_pattern k={r['k']} sigma2={r['sigma2']:.3e}")
    if args.report:
        write_json_report(args.report, {
            "threshold": threshold,
            "profile": profile.to_dict(),
            "violations": [v.to_dict() for v in violations],
            "rank_pattern": rank_reports,
            "passed": ok and rank_ok,
        })
    if ok and rank_ok:
        print(f"✅ CMV-like, {len(profile.segments)} segment(s)")
        return EXIT_OK
    return EXIT_VERIFY


def cmd_bench(args, server: CommandServer) -> int:
    sizes = [int(s) for s in args.sizes.split(",")] if args.sizes else None
    called = server.call_tool("bench", "run_bench", sizes=sizes, seed=args.seed)
    if not called["success"]:
        return _fail(called["error"], EXIT_INPUT)
    df = called["value"]
    csv = bench_tool.to_csv(df)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(csv)
    else:
        sys.stdout.write(csv)
    logger.info("reduce growth exponent %.2f", bench_tool.growth_exponent(df))
    return EXIT_OK


def cmd_spy(args, server: CommandServer) -> int:
    if args.spy_format == "pgm" and not args.output:
        raise UsageError("pgm output needs --output")
    t = read_cmtx(args.input)
    threshold = _threshold(t, args.tol_scale)
    image = spy_tool.spy_emit(t, threshold, fmt=args.spy_format, path=args.output)
    if not args.output:
        sys.stdout.write(image.to_text())
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "reduce": cmd_reduce,
    "eig": cmd_eig,
    "roots": cmd_roots,
    "check": cmd_check,
    "bench": cmd_bench,
    "spy": cmd_spy,
}


def _shift(text: str) -> ShiftStrategy:
    try:
        return ShiftStrategy.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cmv", description="Unitary CMV-like reduction, eigenvalues and polynomial roots.")
    parser.add_argument("--log-level", default=None, help="Logging level (default: CMV_LOG_LEVEL).")
    parser.add_argument("--history", action="store_true", help="Print the command history on stderr.")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=Config.DEFAULT_SEED, help="Seed for generators and starting vectors.")
    common.add_argument("--report", help="Write a JSON report here.")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--input", help="CMTX matrix file.")
    source.add_argument("--gen", help="Generator spec, e.g. fourier:32, circulant:16, haar:16.")

    solve = argparse.ArgumentParser(add_help=False)
    solve.add_argument("--shift", type=_shift, default=ShiftStrategy.wilkinson(),
                       help="zero | rayleigh | wilkinson | re,im (default wilkinson).")
    solve.add_argument("--max-steps", type=int, default=None, help="QR step budget.")

    tol = argparse.ArgumentParser(add_help=False)
    tol.add_argument("--tol-scale", type=float, default=None, help="Threshold factor c in c*n*u*||T||_F.")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="Write a test matrix.")
    p.add_argument("--gen", required=True, help="Generator spec.")
    p.add_argument("--output", help="CMTX output file (stdout when omitted).")
    p.add_argument("--poly", help="Also write the companion polynomial here.")

    p = sub.add_parser("reduce", parents=[common, source, tol], help="Reduce a unitary matrix to CMV-like form.")
    p.add_argument("--output", help="CMTX file for T.")
    p.add_argument("--spy", help="Spy image of T.")
    p.add_argument("--spy-format", choices=spy_tool.FORMATS, default="text")

    sub.add_parser("eig", parents=[common, source, solve], help="Eigenvalues of a unitary matrix.")

    p = sub.add_parser("roots", parents=[common, solve], help="Roots of a monic polynomial.")
    p.add_argument("--coeffs", help="Coefficients, highest degree first, e.g. 1,0,-1.")
    p.add_argument("--poly", help="Polynomial text file.")
    p.add_argument("--scale", action="store_true", help="Geometric-mean scaling of the coefficients.")
    p.add_argument("--spy-h", help="Text spy of H in T S = H for the final unitary part.")
    p.add_argument("--spy-s", help="Text spy of the Givens factor S.")

    p = sub.add_parser("check", parents=[tol], help="Verify a CMV-like matrix file.")
    p.add_argument("--input", required=True)
    p.add_argument("--report")

    p = sub.add_parser("bench", help="Time reduce and eig on Haar-random unitaries.")
    p.add_argument("--sizes", help="Comma-separated sizes (default CMV_BENCH_SIZES).")
    p.add_argument("--seed", type=int, default=Config.DEFAULT_SEED)
    p.add_argument("--output", help="CSV output file (stdout when omitted).")

    p = sub.add_parser("spy", parents=[tol], help="Spy image of a matrix file.")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--spy-format", choices=spy_tool.FORMATS, default="text")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """메인 실행 함수"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT

    try:
        logging.basicConfig(level=(args.log_level or Config.LOG_LEVEL).upper(),
                            format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        Config.validate()
    except ValueError as e:
        return _fail(f"설정 오류: {e}", EXIT_INPUT)

    server = build_server()
    try:
        code = COMMANDS[args.command](args, server)
    except ProfileError as e:
        code = _fail(str(e), EXIT_VERIFY)
    except (CMVError, ValueError, OSError) as e:
        code = _fail(str(e), EXIT_INPUT)
    if args.history:
        print_command_history(server.command_history)
    return code


if __name__ == "__main__":
    sys.exit(main())
