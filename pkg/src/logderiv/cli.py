"""Command-line front end: expression language, command dispatch, rendering.

Grammar (whitespace insensitive)::

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := rational | word | '[' expr ',' expr ']'
              | 'exp' '(' expr ')' | '(' expr ')'
    rational := ['-'] int ('/' posint)?
    word     := letter+          # juxtaposed letters concatenate

Letters are a, b, c, ... within the declared alphabet; a run of letters is a
single word factor so that printed elements such as ``ab - ba`` parse back.
The bare name ``exp`` is always the exponential keyword.

Exit codes: 0 success, 1 parse/usage error, 2 mathematical precondition
failure. Diagnostics go to standard error. The environment variable
LOGDERIV_MAX_DEGREE, when set, caps every truncation degree.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import core_tensor as ct
from . import enveloping as env
from . import magnus
from . import ode_demo as ode
from . import rota_baxter as rb
from . import verify as verify_mod
from .dynkin import LetterDerivation, dynkin_convolution, lie_project
from .errors import ParseError, PreconditionError
from .sparse import format_fraction

DEFAULT_ALPHABET = 2
DEFAULT_MAX_DEGREE = 8
ENV_CAP = "LOGDERIV_MAX_DEGREE"


# ---------------------------------------------------------------------------
# tokenizer

_SYMBOLS = {"+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
            "[": "LBRACK", "]": "RBRACK", "(": "LPAREN", ")": "RPAREN",
            ",": "COMMA"}


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        col = i + 1
        if ch in _SYMBOLS:
            tokens.append((_SYMBOLS[ch], ch, col))
            i += 1
        elif ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("NUM", text[i:j], col))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and text[j].isalpha():
                j += 1
            run = text[i:j]
            if run == "exp":
                tokens.append(("EXP", run, col))
            else:
                tokens.append(("WORD", run, col))
            i = j
        else:
            raise ParseError(f"unexpected character {ch!r}", col)
    tokens.append(("EOF", "", n + 1))
    return tokens


class _ExprParser:
    def __init__(self, text: str, alphabet_size: int):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.alphabet_size = alphabet_size

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind, what):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        return tok

    def parse(self):
        node = self.expr()
        tok = self.peek()
        if tok[0] != "EOF":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return node

    def expr(self):
        node = self.term()
        while self.peek()[0] in ("PLUS", "MINUS"):
            op = self.next()[0]
            rhs = self.term()
            node = ("add" if op == "PLUS" else "sub", node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "STAR":
            self.next()
            node = ("mul", node, self.factor())
        return node

    def factor(self):
        kind, value, col = self.peek()
        if kind == "MINUS":
            self.next()
            tok = self.peek()
            if tok[0] != "NUM":
                raise ParseError("expected a number after '-'", tok[2])
            return ("rat", -self._rational())
        if kind == "NUM":
            return ("rat", self._rational())
        if kind == "WORD":
            self.next()
            letters = []
            for offset, chx in enumerate(value):
                idx = ct.LETTER_NAMES.find(chx)
                if idx < 0 or idx >= self.alphabet_size:
                    raise ParseError(f"unknown letter {chx!r}", col + offset)
                letters.append(idx)
            return ("word", tuple(letters))
        if kind == "LBRACK":
            self.next()
            left = self.expr()
            self.expect("COMMA", "','")
            right = self.expr()
            self.expect("RBRACK", "']'")
            return ("bracket", left, right)
        if kind == "EXP":
            self.next()
            self.expect("LPAREN", "'('")
            inner = self.expr()
            self.expect("RPAREN", "')'")
            return ("exp", inner)
        if kind == "LPAREN":
            # parentheses shape the tree but are not recorded
            self.next()
            inner = self.expr()
            self.expect("RPAREN", "')'")
            return inner
        raise ParseError("expected a rational, letter, bracket, or group", col)

    def _rational(self) -> Fraction:
        num = int(self.next()[1])
        if self.peek()[0] == "SLASH":
            self.next()
            tok = self.expect("NUM", "a positive denominator")
            den = int(tok[1])
            if den == 0:
                raise ParseError("denominator must be positive", tok[2])
            return Fraction(num, den)
        return Fraction(num)


def parse_expr(text: str, alphabet_size: int = DEFAULT_ALPHABET):
    """Parse the expression language into an abstract syntax tree."""
    return _ExprParser(text, alphabet_size).parse()


def expr_to_str(node) -> str:
    """Render an AST back to parseable text."""

    def go(n, parent_level):
        kind = n[0]
        if kind == "rat":
            # a leading minus sign is itself a valid factor prefix
            text, level = format_fraction(n[1]), 3
        elif kind == "word":
            text, level = ct.word_to_str(n[1]), 3
        elif kind == "bracket":
            text, level = f"[{go(n[1], 0)},{go(n[2], 0)}]", 3
        elif kind == "exp":
            text, level = f"exp({go(n[1], 0)})", 3
        elif kind == "mul":
            text, level = f"{go(n[1], 2)}*{go(n[2], 3)}", 2
        elif kind == "add":
            text, level = f"{go(n[1], 1)} + {go(n[2], 2)}", 1
        elif kind == "sub":
            text, level = f"{go(n[1], 1)} - {go(n[2], 2)}", 1
        else:
            raise ValueError(f"unknown node {kind!r}")
        if level < parent_level:
            return f"({text})"
        return text

    return go(node, 0)


def eval_expr(node, max_degree: int) -> ct.TensorElt:
    kind = node[0]
    if kind == "rat":
        return ct.ONE * node[1]
    if kind == "word":
        return ct.word_elt(node[1])
    if kind == "exp":
        return env.exp_truncated(eval_expr(node[1], max_degree), max_degree)
    if kind == "bracket":
        return ct.bracket(eval_expr(node[1], max_degree), eval_expr(node[2], max_degree))
    left = eval_expr(node[1], max_degree)
    right = eval_expr(node[2], max_degree)
    if kind == "add":
        return left + right
    if kind == "sub":
        return left - right
    if kind == "mul":
        return left * right
    raise ValueError(f"unknown node {kind!r}")


def evaluate(text: str, alphabet_size: int, max_degree: int) -> ct.TensorElt:
    return eval_expr(parse_expr(text, alphabet_size), max_degree)


# ---------------------------------------------------------------------------
# rendering

def element_json(a: ct.TensorElt, truncation: int) -> str:
    terms = [{"coeff": format_fraction(a.coefficient(w)), "word": ct.word_to_str(w)}
             for w in sorted(a.keys(), key=lambda w: (len(w), w))]
    return json.dumps({"truncation": truncation, "terms": terms})


def parse_derivation(spec: str, alphabet_size: int) -> LetterDerivation:
    if spec == "Y":
        return LetterDerivation.graduation()
    if spec.startswith("letter:"):
        name = spec[len("letter:"):]
        idx = ct.LETTER_NAMES.find(name) if len(name) == 1 else -1
        if idx < 0 or idx >= alphabet_size:
            raise ParseError(f"unknown letter {name!r} in derivation spec")
        return LetterDerivation.single_letter(idx)
    if spec.startswith("diag:"):
        try:
            coeffs = [Fraction(tok) for tok in spec[len("diag:"):].split(",")]
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed diagonal coefficients in {spec!r}") from None
        if len(coeffs) != alphabet_size:
            raise ParseError(
                f"diagonal needs {alphabet_size} coefficients, got {len(coeffs)}")
        return LetterDerivation.diagonal(coeffs)
    raise ParseError(f"unknown derivation spec {spec!r} (use Y, letter:<c>, diag:...)")


def effective_degree(requested: int) -> int:
    cap = os.environ.get(ENV_CAP)
    if cap is not None:
        try:
            return min(requested, int(cap))
        except ValueError:
            raise ParseError(f"{ENV_CAP} must be an integer, got {cap!r}") from None
    return requested


# ---------------------------------------------------------------------------
# commands

def _print_element(a, truncation, as_json):
    print(element_json(a, truncation) if as_json else str(a))


def _cmd_dynkin(args) -> int:
    n = effective_degree(args.max_degree)
    elt = evaluate(args.expr, args.alphabet, n)
    f = parse_derivation(args.derivation, args.alphabet)
    _print_element(dynkin_convolution(f, elt), n, args.json)
    return 0


def _cmd_project(args) -> int:
    n = effective_degree(args.max_degree)
    elt = evaluate(args.expr, args.alphabet, n)
    if args.mode == "classical":
        out = lie_project(elt)
    elif args.mode.startswith("letter:"):
        name = args.mode[len("letter:"):]
        idx = ct.LETTER_NAMES.find(name) if len(name) == 1 else -1
        if idx < 0 or idx >= args.alphabet:
            raise ParseError(f"unknown letter {name!r} in mode")
        out = lie_project(elt, mode="letter", letter=idx)
    else:
        raise ParseError(f"unknown mode {args.mode!r}")
    _print_element(out, n, args.json)
    return 0


def _cmd_atkinson(args) -> int:
    order = effective_degree(args.order)
    x = evaluate(args.generator, args.alphabet, order)
    delta = parse_derivation(args.weight0_delta, args.alphabet)
    ctx = rb.tensor_graded_inverse_context(delta, alphabet_size=args.alphabet)
    _print_element(rb.atkinson_solve(ctx, x, order), order, args.json)
    return 0


def _cmd_logderiv(args) -> int:
    order = effective_degree(args.order)
    x = evaluate(args.generator, args.alphabet, order)
    d = parse_derivation(args.d, args.alphabet)
    ctx = rb.tensor_graded_inverse_context(d=d, alphabet_size=args.alphabet)
    total = rb.logderiv_sum(ctx, x, order)
    phi = rb.atkinson_solve(ctx, x, order)
    direct = rb.direct_logderiv(ctx, phi, order)
    if args.json:
        payload = {
            "truncation": order,
            "recursion": json.loads(element_json(total, order))["terms"],
            "direct": json.loads(element_json(direct, order))["terms"],
            "agree": total == direct,
        }
        print(json.dumps(payload))
    else:
        print(f"recursion: {total}")
        print(f"direct:    {direct}")
        print(f"agree:     {'yes' if total == direct else 'no'}")
    return 0 if total == direct else 2


def _cmd_magnus(args) -> int:
    order = effective_degree(args.order)
    elt = evaluate(args.expr, args.alphabet, order)
    delta = parse_derivation(args.delta, args.alphabet)
    if args.solve:
        out = magnus.magnus_solve(delta, elt, order)
    else:
        out = magnus.magnus_forward(delta, elt, order)
    _print_element(out, order, args.json)
    return 0


def _cmd_dinv(args) -> int:
    order = effective_degree(args.order)
    elt = evaluate(args.expr, args.alphabet, order)
    _print_element(magnus.dynkin_inverse(elt, order), order, args.json)
    return 0


def _cmd_ode(args) -> int:
    order = effective_degree(args.order)
    a = ode.load_matrix(args.matrix)
    if args.check:
        x = ode.picard_matrix(a, order)
        lam_a = ode.LambdaSeries.embed(a, 1)
        fixed_ok = (ode.LambdaSeries.unit(a.dim)
                    + (x * lam_a).truncate(order).integrate()).truncate(order) == x
        rel_ok = ode.magnus_relation_check(a, order)
        print(f"picard fixed point (order {order}): {'PASS' if fixed_ok else 'FAIL'}")
        print(f"magnus relation (order {order}): {'PASS' if rel_ok else 'FAIL'}")
        return 0 if fixed_ok and rel_ok else 2
    omega = ode.omega_log(ode.picard_matrix(a, order), order)
    for k, comp in enumerate(omega.components):
        print(f"lambda^{k}: {comp}")
    return 0


def _cmd_verify(args) -> int:
    n = effective_degree(args.max_degree)
    names = list(verify_mod.SUITES) if args.suite == "all" else [args.suite]
    checks = verify_mod.run_suites(names, n, args.seed)
    failed = 0
    for name, ok, detail in checks:
        status = "PASS" if ok else "FAIL"
        print(f"{status} {name} ({detail})")
        if not ok:
            failed += 1
    print(f"{len(checks) - failed}/{len(checks)} properties passed")
    return 0 if failed == 0 else 2


# ---------------------------------------------------------------------------

class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _alphabet_size(value: str) -> int:
    n = int(value)
    if not 1 <= n <= 26:
        raise argparse.ArgumentTypeError("alphabet size must be between 1 and 26")
    return n


def _build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="logderiv", description=__doc__,
                             formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, expr_flag="--expr"):
        p.add_argument(expr_flag, required=True)
        p.add_argument("--alphabet", type=_alphabet_size, default=DEFAULT_ALPHABET,
                       help="alphabet size (default 2, at most 26)")
        p.add_argument("--json", action="store_true")

    p = sub.add_parser("dynkin", help="apply the antipode*derivation convolution")
    common(p)
    p.add_argument("--derivation", default="Y")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.set_defaults(fn=_cmd_dynkin)

    p = sub.add_parser("project", help="project onto the Lie elements")
    common(p)
    p.add_argument("--mode", default="classical")
    p.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)
    p.set_defaults(fn=_cmd_project)

    p = sub.add_parser("atkinson", help="solve phi = 1 + R(phi x)")
    common(p, "--generator")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--weight0-delta", default="Y")
    p.set_defaults(fn=_cmd_atkinson)

    p = sub.add_parser("logderiv",
                       help="twisted recursion vs direct logarithmic derivative")
    common(p, "--generator")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--d", required=True)
    p.set_defaults(fn=_cmd_logderiv)

    p = sub.add_parser("magnus", help="forward or inverse operator series")
    common(p)
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--forward", action="store_true")
    mode.add_argument("--solve", action="store_true")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--delta", required=True)
    p.set_defaults(fn=_cmd_magnus)

    p = sub.add_parser("dinv", help="composition series inverting the Dynkin map")
    common(p)
    p.add_argument("--order", type=int, required=True)
    p.set_defaults(fn=_cmd_dinv)

    p = sub.add_parser("ode", help="matrix Magnus demo on a JSON matrix file")
    p.add_argument("--matrix", required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--check", action="store_true")
    p.set_defaults(fn=_cmd_ode)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--suite", default="all",
                   choices=["all"] + list(verify_mod.SUITES))
    p.add_argument("--max-degree", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.fn(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
