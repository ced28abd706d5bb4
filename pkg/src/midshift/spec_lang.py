"""A small language for naming shifts and measures on the command line.

Grammar (whitespace is insignificant)::

    spec     := "weights" ":" expr            weights as a function of n
              | measure
              | NAME [ "(" arg ("," arg)* ")" ]
    measure  := atoms [ "+" density ] | density
    atoms    := "atoms" "[" "(" expr "," expr ")" ("," "(" expr "," expr ")")* "]"
    density  := "density" "[" ( "uniform" "(" expr ")"
                              | "agler_family" "(" expr [ "," expr ] ")" ) "]"
    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom [ "^" unary ]
    atom     := INT | "n" | "sqrt" "(" expr ")" | "(" expr ")"

Only integer literals exist, so ``1/3`` is an exact rational. Each NAME
has a fixed signature of numeric and shift arguments, checked while
parsing together with the admissible argument ranges.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from . import shift_model as sm
from . import transforms as tr
from .completion import stampfli_completion
from .measures import BergerMeasure, agler_density, shift_from_measure, uniform
from .scalar import DomainError, Scalar, is_rational, power, sqrt


class ParseError(ValueError):
    """Syntax, arity or range error with the offending position."""

    def __init__(self, message: str, position: int, expected: frozenset = frozenset(), text: str = ""):
        self.position = position
        self.expected = frozenset(expected)
        self.text = text
        detail = f"{message} at position {position}"
        if self.expected:
            detail += "; expected one of: " + ", ".join(sorted(self.expected))
        super().__init__(detail)

    def caret(self) -> str:
        return f"{self.text}\n{' ' * self.position}^"


# --------------------------------------------------------------------------
# AST

@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Var:
    name: str = "n"


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sqrt:
    operand: "Expr"


Expr = Union[Int, Var, Neg, BinOp, Sqrt]


@dataclass(frozen=True)
class Weights:
    expr: Expr


@dataclass(frozen=True)
class Density:
    kind: str
    args: tuple


@dataclass(frozen=True)
class Measure:
    atoms: tuple  # ((t, m), ...) as Exprs
    density: Optional[Density] = None


@dataclass(frozen=True)
class Call:
    """Catalog entry or transform: numeric args first, then shift args."""

    name: str
    args: tuple  # Exprs
    children: tuple  # Specs


Spec = Union[Weights, Measure, Call]

# signature: (numeric arity choices, shift arity, range check)

def _int_at_least(lo):
    def check(x):
        return is_rational(x) and Fraction(x).denominator == 1 and x >= lo
    check.describe = f"an integer >= {lo}"
    return check


def _positive(x):
    return x > 0


_positive.describe = "positive"


def _unit_interval(x):
    return 0 <= x <= 1


_unit_interval.describe = "in [0, 1]"


def _above_one(x):
    return x > 1


_above_one.describe = "greater than 1"

SIGNATURES = {
    # catalog
    "agler": ((1,), 0, [_int_at_least(2)]),
    "bergman": ((0,), 0, []),
    "dirichlet": ((0,), 0, []),
    "geom2": ((0,), 0, []),
    "unweighted": ((0,), 0, []),
    "constant": ((1,), 0, [_positive]),
    "agler_family": ((1,), 0, [_above_one]),
    "agler_preimage": ((1,), 0, [_int_at_least(2)]),
    "stampfli": ((3,), 0, [_positive, _positive, _positive]),
    # transforms
    "at": ((0,), 1, []),
    "atq": ((1,), 1, [_unit_interval]),
    "atinv": ((0, 1), 1, [_positive]),
    "atiter": ((1,), 1, [_int_at_least(0)]),
    "quotient": ((1,), 1, [_int_at_least(1)]),
    "subshift": ((2,), 1, [_int_at_least(1), _int_at_least(0)]),
    "schur": ((0,), 2, []),
    "power": ((1,), 1, [_positive]),
    "scale": ((1,), 1, [_positive]),
    "backstep": ((1,), 1, [_positive]),
    "normalize": ((0,), 1, []),
    "reciprocal": ((0,), 1, []),
}
BARE_NAMES = frozenset(n for n, (arity, kids, _) in SIGNATURES.items() if arity == (0,) and kids == 0)


# --------------------------------------------------------------------------
# evaluation of numeric expressions

def eval_expr(expr: Expr, n: Optional[int] = None) -> Scalar:
    """Evaluate exactly where possible (rationals and radicals)."""
    if isinstance(expr, Int):
        return Fraction(expr.value)
    if isinstance(expr, Var):
        if n is None:
            raise DomainError("the variable n is only meaningful inside weights:")
        return Fraction(n)
    if isinstance(expr, Neg):
        v = eval_expr(expr.operand, n)
        return -v if is_rational(v) else -float(v)
    if isinstance(expr, Sqrt):
        v = eval_expr(expr.operand, n)
        if v < 0:
            raise DomainError("square root of a negative number")
        return sqrt(v)
    a, b = eval_expr(expr.left, n), eval_expr(expr.right, n)
    op = expr.op
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op == "*":
        return a * b
    if op == "/":
        if b == 0:
            raise DomainError("division by zero")
        return a / b
    if is_rational(b) and Fraction(b).denominator == 1 and is_rational(a):
        return Fraction(a) ** int(b)
    if not a > 0:
        raise DomainError("non-integer power of a non-positive number")
    if is_rational(b):
        return power(a, b)
    return float(a) ** float(b)


def _mentions_n(expr: Expr) -> bool:
    if isinstance(expr, Var):
        return True
    if isinstance(expr, (Neg, Sqrt)):
        return _mentions_n(expr.operand)
    if isinstance(expr, BinOp):
        return _mentions_n(expr.left) or _mentions_n(expr.right)
    return False


# --------------------------------------------------------------------------
# tokenizer and parser

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()\[\],+\-*/^:]))")


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "punct", "end"
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            tokens.append(Token("end", "", pos))
            return tokens
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos,
                             frozenset({"INT", "NAME", "operator"}), text)
        kind = m.lastgroup
        tokens.append(Token(kind, m.group(kind), m.start(kind)))
        pos = m.end()


_EXPR_START = frozenset({"INT", "n", "sqrt", "(", "-"})


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, message, expected=(), tok=None):
        tok = tok or self.tok
        raise ParseError(message, tok.pos, frozenset(expected), self.text)

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind != "end":
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            found = self.tok.text or "end of input"
            self.fail(f"unexpected {found!r}", {text})

    # expressions -------------------------------------------------------
    def expr(self) -> Expr:
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "punct":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.tok.text in ("*", "/") and self.tok.kind == "punct":
            op = self.tok.text
            self.i += 1
            node = BinOp(op, node, self.unary())
        return node

    def unary(self) -> Expr:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.tok
        if tok.kind == "int":
            self.i += 1
            return Int(int(tok.text))
        if tok.kind == "name" and tok.text == "n":
            self.i += 1
            return Var()
        if tok.kind == "name" and tok.text == "sqrt":
            self.i += 1
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return Sqrt(inner)
        if self.accept("("):
            inner = self.expr()
            self.expect(")")
            return inner
        found = tok.text or "end of input"
        self.fail(f"unexpected {found!r} in expression", _EXPR_START)

    def number(self) -> tuple[Expr, Token]:
        start = self.tok
        e = self.expr()
        if _mentions_n(e):
            self.fail("the variable n is only allowed after weights:", (), start)
        return e, start

    # specs -------------------------------------------------------------------
    def spec(self) -> Spec:
        tok = self.tok
        if tok.kind != "name":
            self.fail(f"unexpected {tok.text or 'end of input'!r}",
                      {"weights", "atoms", "density"} | set(SIGNATURES))
        if tok.text == "weights":
            self.i += 1
            self.expect(":")
            return Weights(self.expr())
        if tok.text in ("atoms", "density"):
            return self.measure()
        if tok.text not in SIGNATURES:
            self.fail(f"unknown name {tok.text!r}", {"weights", "atoms", "density"} | set(SIGNATURES))
        return self.call()

    def call(self) -> Call:
        tok = self.tok
        name = tok.text
        self.i += 1
        arities, kids, checks = SIGNATURES[name]
        if not self.accept("("):
            if name in BARE_NAMES:
                return Call(name, (), ())
            self.fail(f"{name} needs arguments", {"("})
        if name in BARE_NAMES and self.accept(")"):
            return Call(name, (), ())
        # numeric arguments: try each arity, preferring the longest that fits
        nums: list[tuple[Expr, Token]] = []
        children: list[Spec] = []
        max_nums = max(arities)
        while True:
            want_number = len(nums) < max_nums and (
                kids == 0 or self._looks_numeric())
            if want_number:
                nums.append(self.number())
            else:
                if len(children) >= kids:
                    self.fail(f"too many arguments for {name}", {")"})
                children.append(self.spec())
            if self.accept(","):
                continue
            self.expect(")")
            break
        if len(nums) not in arities or len(children) != kids:
            self.fail(f"{name} takes {self._describe(arities, kids)}", (), tok)
        values = []
        for (e, etok), check in zip(nums, checks[-len(nums):] if nums else []):
            try:
                v = eval_expr(e)
            except (DomainError, ZeroDivisionError) as exc:
                self.fail(f"invalid argument for {name}: {exc}", (), etok)
            if not check(v):
                self.fail(f"argument of {name} must be {check.describe}", (), etok)
            values.append(v)
        if name == "stampfli" and not values[0] < values[1] < values[2]:
            self.fail("stampfli needs increasing weights a < b < c", (), tok)
        return Call(name, tuple(e for e, _ in nums), tuple(children))

    def _looks_numeric(self) -> bool:
        tok = self.tok
        if tok.kind == "int" or tok.text in ("(", "-"):
            return True
        return tok.kind == "name" and tok.text in ("sqrt", "n")

    @staticmethod
    def _describe(arities, kids) -> str:
        nums = " or ".join(str(a) for a in arities)
        return f"{nums} numeric and {kids} shift argument(s)"

    def measure(self) -> Measure:
        atoms = ()
        density = None
        if self.accept("atoms"):
            self.expect("[")
            pairs = []
            while True:
                self.expect("(")
                t, _ = self.number()
                self.expect(",")
                m, _ = self.number()
                self.expect(")")
                pairs.append((t, m))
                if not self.accept(","):
                    break
            self.expect("]")
            atoms = tuple(pairs)
            if not self.accept("+"):
                return Measure(atoms, None)
        if not self.accept("density"):
            self.fail("expected a density", {"density"})
        self.expect("[")
        kind = self.tok.text
        if kind not in ("uniform", "agler_family"):
            self.fail(f"unknown density {kind!r}", {"uniform", "agler_family"})
        self.i += 1
        self.expect("(")
        args = [self.number()[0]]
        if kind == "agler_family" and self.accept(","):
            args.append(self.number()[0])
        self.expect(")")
        self.expect("]")
        density = Density(kind, tuple(args))
        return Measure(atoms, density)

    def parse(self) -> Spec:
        node = self.spec()
        if self.tok.kind != "end":
            self.fail(f"unexpected trailing {self.tok.text!r}", {"end of input"})
        return node


def parse_shift_spec(text: str) -> Spec:
    """Parse ``text`` into an AST; raises :class:`ParseError`."""
    return _Parser(text).parse()


def parse_number(text: str) -> Scalar:
    """Parse and evaluate a constant expression such as ``1/3`` or ``sqrt(1/2)``."""
    p = _Parser(text)
    e, _ = p.number()
    if p.tok.kind != "end":
        p.fail(f"unexpected trailing {p.tok.text!r}", {"end of input"})
    try:
        return eval_expr(e)
    except (DomainError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), 0, frozenset(), text) from None


# --------------------------------------------------------------------------
# pretty printing

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def format_expr(e: Expr, level: int = 0) -> str:
    """Canonical text; ``level`` is the binding strength required by the context.

    Levels: 0 any, 1 additive right operand, 2 term, 3 unary, 4 atom.
    """
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, Var):
        return "n"
    if isinstance(e, Sqrt):
        return f"sqrt({format_expr(e.operand)})"
    if isinstance(e, Neg):
        s = "-" + format_expr(e.operand, 3)
        own = 3
    elif e.op == "^":
        s = f"{format_expr(e.left, 4)}^{format_expr(e.right, 3)}"
        own = 3
    elif e.op in ("+", "-"):
        s = f"{format_expr(e.left, 1)} {e.op} {format_expr(e.right, 2)}"
        own = 1
    else:
        s = f"{format_expr(e.left, 2)}{e.op}{format_expr(e.right, 3)}"
        own = 2
    # an additive expression is fine at level 1 only as a left operand
    needs = level > own
    return f"({s})" if needs else s


def format_spec(node: Spec) -> str:
    if isinstance(node, Weights):
        return f"weights: {format_expr(node.expr)}"
    if isinstance(node, Measure):
        parts = []
        if node.atoms:
            parts.append("atoms[" + ", ".join(f"({format_expr(t)}, {format_expr(m)})"
                                              for t, m in node.atoms) + "]")
        if node.density is not None:
            args = ", ".join(format_expr(a) for a in node.density.args)
            parts.append(f"density[{node.density.kind}({args})]")
        return " + ".join(parts)
    if not node.args and not node.children:
        return node.name
    inner = [format_expr(a) for a in node.args] + [format_spec(c) for c in node.children]
    return f"{node.name}({', '.join(inner)})"


# --------------------------------------------------------------------------
# building objects from the AST

def build_measure(node: Measure):
    atoms = tuple((eval_expr(t), eval_expr(m)) for t, m in node.atoms)
    density = None
    if node.density is not None:
        args = [eval_expr(a) for a in node.density.args]
        density = uniform(*args) if node.density.kind == "uniform" else agler_density(*args)
    return BergerMeasure(atoms, density)


def build_shift(node: Spec):
    """Turn an AST into a :class:`~midshift.shift_model.WeightedShift`."""
    if isinstance(node, Weights):
        expr = node.expr

        def w2(n):
            w = eval_expr(expr, n)
            if not w > 0:
                raise DomainError(f"weight {n} is not positive")
            return w * w

        return sm.WeightedShift(w2, label=format_spec(node))
    if isinstance(node, Measure):
        shift = shift_from_measure(build_measure(node))
        shift.label = format_spec(node)
        return shift
    nums = [eval_expr(a) for a in node.args]
    kids = [build_shift(c) for c in node.children]
    name = node.name
    if name == "agler":
        out = sm.agler(int(nums[0]))
    elif name in ("bergman", "dirichlet", "geom2", "unweighted"):
        out = sm.CATALOG[name]()
    elif name == "constant":
        out = sm.constant(nums[0])
    elif name == "agler_family":
        out = sm.agler_family(nums[0])
    elif name == "agler_preimage":
        out = tr.agler_preimage(int(nums[0]))
    elif name == "stampfli":
        out = stampfli_completion(*nums)
    elif name == "at":
        out = tr.aluthge(kids[0])
    elif name == "atq":
        out = tr.aluthge_q(kids[0], nums[0])
    elif name == "atinv":
        out = tr.inverse_aluthge(kids[0], nums[0] if nums else None).shift
    elif name == "atiter":
        out = tr.aluthge_iter(kids[0], int(nums[0]))
    elif name == "quotient":
        out = sm.quotient_shift(kids[0], int(nums[0]))
    elif name == "subshift":
        out = sm.subshift(kids[0], int(nums[0]), int(nums[1]))
    elif name == "schur":
        out = sm.schur_product(kids[0], kids[1])
    elif name == "power":
        out = sm.schur_power(kids[0], nums[0])
    elif name == "scale":
        out = sm.scale(kids[0], nums[0])
    elif name == "backstep":
        out = sm.backstep(kids[0], nums[0])
    elif name == "normalize":
        out = sm.normalize(kids[0])
    elif name == "reciprocal":
        out = sm.reciprocal(kids[0])
    else:  # pragma: no cover - SIGNATURES and this table are kept in step
        raise DomainError(f"no builder for {name}")
    return out
