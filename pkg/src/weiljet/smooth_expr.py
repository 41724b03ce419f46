"""Closed-form smooth expressions and their Taylor data.

Expressions are immutable trees over constants, variables ``y1..yd``,
``+ - * /``, integer powers and the primitives exp, log, sin, cos, sqrt.

Taylor polynomials are obtained by evaluating the tree over the Weil algebra
R[x1..xd]/m^(k+1) at ``p + (x1, ..., xd)``: every primitive h is lifted by
``h(c + nu) = sum_j h^(j)(c)/j! nu^j``, which terminates because nu is
nilpotent. No symbolic differentiation happens anywhere.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from numbers import Number
from typing import Sequence

from .errors import ArityError, DomainError, ParseError
from .weil_algebra import (
    AlgebraElement,
    apply_series,
    augmentation,
    jet_spec,
    maximal_ideal_part,
)

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class Expr:
    """Base node. Supports Python operators for building trees in code."""

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("only integer exponents are supported")
        return Pow(self, n)

    def __str__(self):
        return to_infix(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: Number


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int  # 1-based

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 1:
            raise ValueError(f"variable index must be >= 1, got {self.index!r}")


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True, eq=True)
class Call(Expr):
    func: str
    arg: Expr

    def __post_init__(self):
        if self.func not in FUNCTIONS:
            raise ValueError(f"unknown function {self.func!r}")


def as_expr(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Number) and not isinstance(x, bool):
        return Const(x)
    raise TypeError(f"cannot use {x!r} as an expression")


def var(i: int) -> Var:
    return Var(i)


def exp(e) -> Call:
    return Call("exp", as_expr(e))


def log(e) -> Call:
    return Call("log", as_expr(e))


def sin(e) -> Call:
    return Call("sin", as_expr(e))


def cos(e) -> Call:
    return Call("cos", as_expr(e))


def sqrt(e) -> Call:
    return Call("sqrt", as_expr(e))


def max_var(expr: Expr) -> int:
    """Largest variable index used (0 for a constant expression)."""
    match expr:
        case Const():
            return 0
        case Var(i):
            return i
        case Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b):
            return max(max_var(a), max_var(b))
        case Neg(a) | Pow(a, _) | Call(_, a):
            return max_var(a)
    raise TypeError(f"not an expression: {expr!r}")


def substitute(expr: Expr, args: Sequence[Expr]) -> Expr:
    """Replace variable y_i by args[i-1]."""
    match expr:
        case Const():
            return expr
        case Var(i):
            if i > len(args):
                raise ArityError(f"y{i} has no substitute among {len(args)} arguments")
            return args[i - 1]
        case Add(a, b):
            return Add(substitute(a, args), substitute(b, args))
        case Sub(a, b):
            return Sub(substitute(a, args), substitute(b, args))
        case Mul(a, b):
            return Mul(substitute(a, args), substitute(b, args))
        case Div(a, b):
            return Div(substitute(a, args), substitute(b, args))
        case Neg(a):
            return Neg(substitute(a, args))
        case Pow(a, n):
            return Pow(substitute(a, args), n)
        case Call(f, a):
            return Call(f, substitute(a, args))
    raise TypeError(f"not an expression: {expr!r}")


def map_constants(expr: Expr, fn) -> Expr:
    """Copy of `expr` with every constant value replaced by fn(value)."""
    match expr:
        case Const(v):
            return Const(fn(v))
        case Var():
            return expr
        case Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b):
            return type(expr)(map_constants(a, fn), map_constants(b, fn))
        case Neg(a):
            return Neg(map_constants(a, fn))
        case Pow(a, n):
            return Pow(map_constants(a, fn), n)
        case Call(f, a):
            return Call(f, map_constants(a, fn))
    raise TypeError(f"not an expression: {expr!r}")


# ---------------------------------------------------------------------------
# evaluation


def _walk(expr: Expr, env, const, div, power, call):
    def go(e):
        match e:
            case Const(v):
                return const(v)
            case Var(i):
                return env[i - 1]
            case Add(a, b):
                return go(a) + go(b)
            case Sub(a, b):
                return go(a) - go(b)
            case Mul(a, b):
                return go(a) * go(b)
            case Div(a, b):
                return div(go(a), go(b))
            case Neg(a):
                return -go(a)
            case Pow(a, n):
                return power(go(a), n)
            case Call(f, a):
                return call(f, go(a))
        raise TypeError(f"not an expression: {e!r}")

    return go(expr)


def _check_arity(expr: Expr, point: Sequence) -> None:
    if max_var(expr) > len(point):
        raise ArityError(f"expression uses y{max_var(expr)} but the point has {len(point)} coordinates")


def _float_div(a, b):
    if b == 0:
        raise DomainError("division by zero")
    if isinstance(a, int) and isinstance(b, int) and a % b == 0:
        return a // b
    return a / b


def _float_pow(a, n):
    if n < 0 and a == 0:
        raise DomainError("negative power of zero")
    if n < 0:
        return _float_div(1, a ** (-n))
    return a**n


def _float_call(f, a):
    try:
        if f == "exp":
            return math.exp(a)
        if f == "sin":
            return math.sin(a)
        if f == "cos":
            return math.cos(a)
        if a <= 0:
            raise DomainError(f"{f} is only smooth on positive arguments, got {a}")
        return math.log(a) if f == "log" else math.sqrt(a)
    except OverflowError as exc:
        raise DomainError(f"{f}({a}) overflows") from exc


def evaluate(expr: Expr, point: Sequence[Number]) -> Number:
    """Numeric value of `expr` at `point`; integer data stays integer when possible."""
    _check_arity(expr, point)
    return _walk(expr, list(point), lambda v: v, _float_div, _float_pow, _float_call)


def series_coefficients(func: str, c: float, k: int) -> list[float]:
    """Taylor coefficients h^(j)(c)/j!, j = 0..k, of a primitive h at c."""
    if func == "exp":
        e = _float_call("exp", c)
        return [e / math.factorial(j) for j in range(k + 1)]
    if func in ("sin", "cos"):
        s, co = math.sin(c), math.cos(c)
        cycle = [s, co, -s, -co] if func == "sin" else [co, -s, -co, s]
        return [cycle[j % 4] / math.factorial(j) for j in range(k + 1)]
    if func == "log":
        if c <= 0:
            raise DomainError(f"log is not smooth at {c}")
        return [math.log(c)] + [(-1) ** (j + 1) / (j * c**j) for j in range(1, k + 1)]
    if func == "sqrt":
        if c <= 0:
            raise DomainError(f"sqrt is not smooth at {c}")
        out, binom = [], 1.0
        for j in range(k + 1):
            out.append(binom * c ** (0.5 - j))
            binom *= (0.5 - j) / (j + 1)
        return out
    raise ValueError(f"unknown function {func!r}")


def lift(func: str, a: AlgebraElement) -> AlgebraElement:
    """Apply primitive `func` to an algebra element through its Taylor series."""
    c = augmentation(a)
    coeffs = series_coefficients(func, c, a.spec.k)
    return apply_series(maximal_ideal_part(a), coeffs)


def _alg_power(a: AlgebraElement, n: int) -> AlgebraElement:
    if n < 0 and augmentation(a) == 0:
        raise DomainError("negative power of a non-invertible element")
    return a**n


def evaluate_in(expr: Expr, args: Sequence[AlgebraElement]) -> AlgebraElement:
    """Evaluate `expr` with y_i bound to the algebra element args[i-1]."""
    _check_arity(expr, args)
    if not args:
        raise ArityError("algebra evaluation needs at least one argument to fix the algebra")
    spec = args[0].spec
    return _walk(expr, list(args), spec.constant, lambda a, b: a / b, _alg_power, lift)


def taylor(expr: Expr, point: Sequence[Number], k: int) -> AlgebraElement:
    """Order-k Taylor polynomial of `expr` at `point`, in x_i = y_i - point_i.

    The result lives in R[x1..xd]/m^(k+1) with d = len(point).
    """
    d = len(point)
    if d == 0:
        raise ArityError("the expansion point must have at least one coordinate")
    _check_arity(expr, point)
    spec = jet_spec(d, k)
    args = [spec.generator(i) + point[i] for i in range(d)]
    return evaluate_in(expr, args)


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class SmoothMap:
    """A map R^arity -> R^len(components) given by one expression per output."""

    arity: int
    components: tuple[Expr, ...]

    def __post_init__(self):
        comps = tuple(as_expr(c) for c in self.components)
        object.__setattr__(self, "components", comps)
        if self.arity < 1:
            raise ArityError("a smooth map needs at least one input coordinate")
        for c in comps:
            if max_var(c) > self.arity:
                raise ArityError(f"component {to_infix(c)} uses a variable beyond arity {self.arity}")

    @classmethod
    def identity(cls, d: int) -> "SmoothMap":
        return cls(d, tuple(Var(i + 1) for i in range(d)))

    @classmethod
    def parse(cls, arity: int, components: Sequence[str]) -> "SmoothMap":
        return cls(arity, tuple(parse_expr(s) for s in components))

    @property
    def out_dim(self) -> int:
        return len(self.components)

    def __call__(self, point: Sequence[Number]) -> tuple:
        if len(point) != self.arity:
            raise ArityError(f"map takes {self.arity} coordinates, got {len(point)}")
        return tuple(evaluate(c, point) for c in self.components)

    def compose(self, inner: "SmoothMap") -> "SmoothMap":
        """self ∘ inner."""
        if inner.out_dim != self.arity:
            raise ArityError("maps are not composable")
        return SmoothMap(inner.arity, tuple(substitute(c, inner.components) for c in self.components))


def taylor_map(phi: SmoothMap, point: Sequence[Number], k: int):
    """The k-jet of `phi` at `point` as a MapJet."""
    from .map_jet import MapJet

    if len(point) != phi.arity:
        raise ArityError(f"map takes {phi.arity} coordinates, got {len(point)}")
    comps = tuple(taylor(c, point, k) for c in phi.components)
    return MapJet(tuple(point), k, comps)


# ---------------------------------------------------------------------------
# text and JSON forms

_BINOPS = {ast.Add: Add, ast.Sub: Sub, ast.Mult: Mul, ast.Div: Div}


def parse_expr(text: str) -> Expr:
    """Parse infix text such as ``exp(y1)*y2 - 3*y1^2``.

    ``^`` and ``**`` both denote integer powers; ``y`` alone means ``y1``.
    """
    source = text.replace("^", "**")
    try:
        tree = ast.parse(source.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"invalid expression {text!r}: {exc.msg}", location=exc.offset) from None
    return _from_ast(tree.body, text)


def _int_exponent(node: ast.AST, text: str) -> int:
    sign = 1
    while isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        if isinstance(node.op, ast.USub):
            sign = -sign
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        if float(node.value).is_integer():
            return sign * int(node.value)
    raise ParseError(f"exponent must be an integer literal in {text!r}", location=getattr(node, "col_offset", None))


def _from_ast(node: ast.AST, text: str) -> Expr:
    loc = getattr(node, "col_offset", None)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Const(node.value)
    elif isinstance(node, ast.Name):
        name = node.id
        if name == "y":
            return Var(1)
        if name.startswith("y") and name[1:].isdigit() and int(name[1:]) >= 1:
            return Var(int(name[1:]))
        raise ParseError(f"unknown name {name!r}; variables are y1, y2, ...", location=loc)
    elif isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            return Pow(_from_ast(node.left, text), _int_exponent(node.right, text))
        if type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](_from_ast(node.left, text), _from_ast(node.right, text))
    elif isinstance(node, ast.UnaryOp):
        if isinstance(node.op, ast.USub):
            inner = _from_ast(node.operand, text)
            if isinstance(inner, Const):
                return Const(-inner.value)
            return Neg(inner)
        if isinstance(node.op, ast.UAdd):
            return _from_ast(node.operand, text)
    elif isinstance(node, ast.Call):
        if isinstance(node.func, ast.Name) and node.func.id in FUNCTIONS and len(node.args) == 1 and not node.keywords:
            return Call(node.func.id, _from_ast(node.args[0], text))
        raise ParseError(f"unsupported call in {text!r}; functions are {', '.join(FUNCTIONS)}", location=loc)
    raise ParseError(f"unsupported syntax in {text!r}", location=loc)


def to_infix(expr: Expr) -> str:
    match expr:
        case Const(v):
            return f"({v!r})" if v < 0 else repr(v)
        case Var(i):
            return f"y{i}"
        case Add(a, b):
            return f"({to_infix(a)} + {to_infix(b)})"
        case Sub(a, b):
            return f"({to_infix(a)} - {to_infix(b)})"
        case Mul(a, b):
            return f"{to_infix(a)}*{to_infix(b)}"
        case Div(a, b):
            return f"{to_infix(a)}/({to_infix(b)})"
        case Neg(a):
            return f"(-{to_infix(a)})"
        case Pow(a, n):
            base = to_infix(a)
            if not isinstance(a, (Var, Call)) and not base.startswith("("):
                base = f"({base})"
            return f"{base}^{n}" if n >= 0 else f"{base}^({n})"
        case Call(f, a):
            return f"{f}({to_infix(a)})"
    raise TypeError(f"not an expression: {expr!r}")


_NODE_OPS: dict[type, str] = {Add: "add", Sub: "sub", Mul: "mul", Div: "div"}
_OP_NODES = {v: k for k, v in _NODE_OPS.items()}


def expr_to_json(expr: Expr) -> dict:
    match expr:
        case Const(v):
            return {"op": "const", "args": [v]}
        case Var(i):
            return {"op": "var", "args": [i]}
        case Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b):
            return {"op": _NODE_OPS[type(expr)], "args": [expr_to_json(a), expr_to_json(b)]}
        case Neg(a):
            return {"op": "neg", "args": [expr_to_json(a)]}
        case Pow(a, n):
            return {"op": "pow", "args": [expr_to_json(a), n]}
        case Call(f, a):
            return {"op": f, "args": [expr_to_json(a)]}
    raise TypeError(f"not an expression: {expr!r}")


def expr_from_json(obj) -> Expr:
    """Accepts the JSON AST form or an infix string."""
    if isinstance(obj, str):
        return parse_expr(obj)
    if isinstance(obj, Number) and not isinstance(obj, bool):
        return Const(obj)
    if not isinstance(obj, dict) or "op" not in obj or not isinstance(obj.get("args"), list):
        raise ParseError(f"expression node must be {{'op': ..., 'args': [...]}}, got {obj!r}")
    op, args = obj["op"], obj["args"]
    try:
        if op == "const":
            (v,) = args
            return Const(as_expr(v).value)
        if op == "var":
            (i,) = args
            return Var(i)
        if op in _OP_NODES:
            a, b = args
            return _OP_NODES[op](expr_from_json(a), expr_from_json(b))
        if op == "neg":
            (a,) = args
            return Neg(expr_from_json(a))
        if op == "pow":
            a, n = args
            if not isinstance(n, int) or isinstance(n, bool):
                raise ParseError(f"pow exponent must be an integer, got {n!r}")
            return Pow(expr_from_json(a), n)
        if op in FUNCTIONS:
            (a,) = args
            return Call(op, expr_from_json(a))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"malformed {op!r} node: {exc}") from None
    raise ParseError(f"unknown expression op {op!r}")

