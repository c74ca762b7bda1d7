"""Command-line frontend.

Exit codes: 0 success, 1 usage or parse error, 2 mathematical precondition
violated (for instance a form that is not positive definite).
"""

from __future__ import annotations

import argparse
import json
import random
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import forms as _forms
from . import hilbert as _hilbert
from . import oracle as _oracle
from .exactnum import FactorizationError, format_rational, parse_rational, place
from .forms import (
    NotPositiveDefiniteError,
    QForm,
    SingularFormError,
    equivalent,
    invariants,
    scaled_identity,
    simplex_form,
)
from .geometry import (
    PointSet,
    beckman_quarles_simplex,
    rational_triangle,
    triangle_form,
    verify_distances,
)
from .graphinv import analyze, clique_number, connectivity, embeds, is_nonempty

_RAT = r"-?\d+(?:/\d+)?"


class FormSyntaxError(ValueError):
    def __init__(self, text: str, pos: int, msg: str):
        self.text, self.pos = text, pos
        super().__init__(f"{msg} at position {pos} in {text!r}")


class _Scanner:
    def __init__(self, text: str, pos: int = 0):
        self.text, self.pos = text, pos

    def fail(self, msg: str) -> FormSyntaxError:
        return FormSyntaxError(self.text, self.pos, msg)

    def expect(self, ch: str) -> None:
        if not self.text.startswith(ch, self.pos):
            raise self.fail(f"expected {ch!r}")
        self.pos += len(ch)

    def peek(self, ch: str) -> bool:
        return self.text.startswith(ch, self.pos)

    def rational(self) -> Fraction:
        m = re.compile(_RAT).match(self.text, self.pos)
        if not m:
            raise self.fail("expected a rational number")
        self.pos = m.end()
        try:
            return parse_rational(m.group())
        except ZeroDivisionError:
            raise FormSyntaxError(self.text, m.start(), "zero denominator") from None

    def rationals(self, close: Optional[str] = None) -> list[Fraction]:
        out = [self.rational()]
        while self.peek(","):
            self.pos += 1
            out.append(self.rational())
        if close is not None:
            self.expect(close)
        return out

    def end(self) -> None:
        if self.pos != len(self.text):
            raise self.fail("unexpected trailing input")


def parse_form(text: str, require_posdef: bool = True) -> QForm:
    """Parse ``diag:..``, ``gram:[[..],..]``, ``I<n>``, ``I<n>/<d>`` or ``S<n>``."""
    m = re.fullmatch(rf"I(\d+)(?:/({_RAT}))?", text)
    if m:
        n = int(m.group(1))
        d = parse_rational(m.group(2)) if m.group(2) else Fraction(1)
        if n < 1 or d <= 0:
            raise FormSyntaxError(text, 1, "I<n>/<d> needs n >= 1 and d > 0")
        q = scaled_identity(n, d)
    elif re.fullmatch(r"S\d+", text):
        n = int(text[1:])
        if n < 1:
            raise FormSyntaxError(text, 1, "S<n> needs n >= 1")
        q = simplex_form(n)
    elif text.startswith("diag:"):
        sc = _Scanner(text, len("diag:"))
        entries = sc.rationals()
        sc.end()
        q = QForm.diagonal(entries)
    elif text.startswith("gram:"):
        sc = _Scanner(text, len("gram:"))
        sc.expect("[")
        rows = []
        while True:
            start = sc.pos
            sc.expect("[")
            rows.append((start, sc.rationals("]")))
            if sc.peek(","):
                sc.pos += 1
                continue
            sc.expect("]")
            break
        sc.end()
        n = len(rows)
        for start, row in rows:
            if len(row) != n:
                raise FormSyntaxError(text, start, f"row has {len(row)} entries, expected {n}")
        try:
            q = QForm(tuple(tuple(r) for _, r in rows))
        except ValueError as exc:
            raise FormSyntaxError(text, len("gram:"), str(exc)) from None
    else:
        raise FormSyntaxError(text, 0, "unknown form syntax")
    if require_posdef:
        q.check_positive_definite()
    return q


# -- commands -----------------------------------------------------------------

def _table_row(args: tuple[int, int]) -> list[int]:
    n, max_d = args
    return [clique_number(scaled_identity(n, d)) for d in range(1, max_d + 1)]


def cmd_table(max_n: int, max_d: int, jobs: int = 1) -> list[list[int]]:
    """Clique numbers of G(Q^n, (1/d) I_n); rows n = 1..max_n, columns d = 1..max_d."""
    if max_n < 1 or max_d < 1:
        raise ValueError("table bounds must be >= 1")
    work = [(n, max_d) for n in range(1, max_n + 1)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_table_row, work))
    return [_table_row(w) for w in work]


def cmd_selftest(seed: int = 20240101, pairs: int = 200) -> list[str]:
    """Run the consistency sweeps; return a list of failure descriptions."""
    failures: list[str] = []
    rng = random.Random(seed)
    for _ in range(pairs):
        a = Fraction(rng.choice((1, -1)) * rng.randint(1, 10**6), rng.randint(1, 10**6))
        b = Fraction(rng.choice((1, -1)) * rng.randint(1, 10**6), rng.randint(1, 10**6))
        if not _hilbert.product_formula_holds(a, b):
            failures.append(f"product formula fails for ({a}, {b})")
    for k in range(1, 13):
        closed = _forms.s_k_invariants(k)
        direct = _forms.invariants(_forms.simplex_form(k))
        if closed != direct:
            failures.append(
                f"S_{k} closed form {json.dumps(closed.to_json())} != "
                f"direct {json.dumps(direct.to_json())}"
            )
    grid = [s * v for v in (1, 2, 3, 5, 6, 10, 30) for s in (1, -1)]
    for a in grid:
        for b in grid:
            for nu in ("inf", 2, 3, 5):
                h = _hilbert.hilbert(a, b, nu)
                o = _oracle.brute_hilbert(a, b, nu)
                if h != o:
                    failures.append(f"hilbert({a}, {b}, {nu}) = {h} but oracle says {o}")
    return failures


# -- argument parsing -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # usage errors exit 1, not 2
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _emit(args: argparse.Namespace, payload, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _points_text(ps: PointSet) -> str:
    return "\n".join(
        "(" + ", ".join(format_rational(x) for x in p) + ")" for p in ps.points
    )


def _report_text(ps: PointSet, q: QForm) -> tuple[dict, str]:
    rep = verify_distances(ps, q)
    lines = [_points_text(ps)]
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            side = rep.side_lengths[i][j]
            shown = format_rational(side) if side is not None else "irrational"
            lines.append(f"|p{i} - p{j}| = {shown}")
    lines.append(f"all_rational {_bool(rep.all_rational)}")
    lines.append(f"affinely_independent {_bool(rep.affinely_independent)}")
    lines.append(f"rank {rep.rank}")
    return {"points": ps.to_json(), "report": rep.to_json()}, "\n".join(lines)


def _parse_arg(fn: Callable, text: str):
    try:
        return fn(text)
    except ValueError as exc:
        raise FormSyntaxError(text, 0, str(exc)) from None


def _run(args: argparse.Namespace) -> int:
    cmd = args.command
    if cmd == "invariants":
        inv = invariants(parse_form(args.form))
        text = "\n".join(
            [f"dim {inv.dim}", f"det_class {inv.det_class}",
             f"signature {inv.signature[0]} {inv.signature[1]}"]
            + [f"hasse {nu} {'+1' if e > 0 else '-1'}" for nu, e in sorted(inv.hasse.items())]
        )
        _emit(args, inv.to_json(), text)
    elif cmd in ("equivalent", "embeds"):
        q1, q2 = parse_form(args.form1), parse_form(args.form2)
        val = equivalent(q1, q2) if cmd == "equivalent" else embeds(q1, q2)
        _emit(args, {cmd: val}, _bool(val))
    elif cmd == "clique":
        val = clique_number(parse_form(args.form))
        _emit(args, {"clique": val}, str(val))
    elif cmd == "nonempty":
        val = is_nonempty(parse_form(args.form))
        _emit(args, {"nonempty": val}, _bool(val))
    elif cmd == "connectivity":
        val = connectivity(parse_form(args.form)).value
        _emit(args, {"connectivity": val}, val)
    elif cmd == "analyze":
        rep = analyze(parse_form(args.form)).to_json()
        _emit(args, rep, "\n".join(f"{k} {json.dumps(v)}" for k, v in rep.items()))
    elif cmd == "hilbert":
        a, b = _parse_arg(parse_rational, args.a), _parse_arg(parse_rational, args.b)
        val = _hilbert.hilbert(a, b, _parse_arg(place, args.place))
        _emit(args, {"hilbert": val}, "+1" if val > 0 else "-1")
    elif cmd == "simplex":
        ps = beckman_quarles_simplex(args.n)
        payload, text = _report_text(ps, scaled_identity(args.n))
        _emit(args, payload, text)
    elif cmd == "triangle":
        ps = rational_triangle(args.n)
        payload, text = _report_text(ps, triangle_form(args.n))
        _emit(args, payload, text)
    elif cmd == "table":
        rows = cmd_table(args.max_n, args.max_d, args.jobs)
        header = "n\\d " + " ".join(str(d) for d in range(1, args.max_d + 1))
        text = "\n".join(
            [header] + [f"{n} " + " ".join(map(str, row)) for n, row in enumerate(rows, 1)]
        )
        _emit(args, {"max_n": args.max_n, "max_d": args.max_d, "rows": rows}, text)
    elif cmd == "oracle":
        q = parse_form(args.form)
        bounds = _oracle.SearchBounds(args.den, args.height, args.max_candidates)
        if args.oracle_command == "unit-vectors":
            vecs = _oracle.search_unit_vectors(q, bounds)
            payload = [[format_rational(x) for x in v] for v in vecs]
            _emit(args, payload, _points_text(PointSet(q.dim, tuple(vecs))) if vecs else "none")
        else:
            ps = _oracle.search_clique(q, args.size, bounds)
            if ps is None:
                _emit(args, None, "none")
            else:
                _emit(args, ps.to_json(), _points_text(ps))
    elif cmd == "selftest":
        failures = cmd_selftest()
        _emit(args, {"failures": failures}, "\n".join(failures) or "all checks passed")
        return 1 if failures else 0
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a --json given before it
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    parser = _Parser(prog="qformgraph", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("invariants", parents=[common], help="dim, det class, signature, Hasse map")
    p.add_argument("form")
    for name in ("equivalent", "embeds"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("form1")
        p.add_argument("form2")
    for name in ("clique", "nonempty", "connectivity", "analyze"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("form")
    p = sub.add_parser("hilbert", parents=[common], help="Hilbert symbol (a, b)_place")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("place", help="'inf' or a prime")
    for name in ("simplex", "triangle"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("n", type=int)
    p = sub.add_parser("table", parents=[common], help="clique numbers of (1/d) I_n")
    p.add_argument("max_n", type=int)
    p.add_argument("max_d", type=int)
    p.add_argument("--jobs", type=int, default=1)
    sub.add_parser("selftest", parents=[common])

    p = sub.add_parser("oracle", parents=[common], help="brute-force searches")
    osub = p.add_subparsers(dest="oracle_command", required=True, parser_class=_Parser)
    for name in ("unit-vectors", "clique"):
        o = osub.add_parser(name, parents=[common])
        o.add_argument("form")
        o.add_argument("--den", type=int, default=5)
        o.add_argument("--height", type=int, default=5)
        o.add_argument("--max-candidates", type=int, default=10_000)
        if name == "clique":
            o.add_argument("--size", type=int, required=True)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (NotPositiveDefiniteError, SingularFormError, FactorizationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormSyntaxError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        # remaining ValueErrors are violated preconditions (n < 2, zero symbol args, ...)
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
