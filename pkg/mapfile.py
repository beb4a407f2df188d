"""
Reader and writer for polynomial map files.

    # comment
    vars: z1 z2
    F1 = z1 + z2^2
    F2 = z2

Expressions use integer and rational literals, the declared variable names,
+, -, *, / (by nonzero constants only), ^ with a non-negative integer
exponent, and parentheses. Parsing is top-down operator precedence.
"""
import logging
import re
from fractions import Fraction
from typing import List, Optional

from seriescore import QQ, JetflowError, MapTuple, Series

logger = logging.getLogger(__name__)

DEFAULT_DEGREE = 8

# beyond this the exact dropped-term check is skipped
MAX_CHECK_DEGREE = 64

MAX_EXPONENT = 256

# size limit for constant powers such as 7^200
MAX_CONSTANT_BITS = 4096

TOKEN_PATTERN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+)|(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")
NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z_0-9]*$")
ASSIGNMENT_PATTERN = re.compile(r"\s*F(\d+)\s*=")


class MapSyntaxError(JetflowError):
    """A map file does not follow the grammar."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Node:
    """Expression tree node; `column` is 1-based within the source line."""

    __slots__ = ("kind", "args", "column")

    def __init__(self, kind: str, args: tuple, column: int) -> None:
        self.kind = kind
        self.args = args
        self.column = column


class _Token:
    lbp = 0

    def __init__(self, column: int, text: str = "") -> None:
        self.column = column
        self.text = text

    def nud(self, parser: "ExpressionParser") -> Node:
        raise parser.error(f"unexpected '{self.text or 'end of expression'}'", self.column)

    def led(self, parser: "ExpressionParser", left: Node) -> Node:
        raise parser.error(f"unexpected '{self.text}'", self.column)


class _Number(_Token):
    def nud(self, parser):
        return Node("num", (Fraction(int(self.text)),), self.column)


class _Name(_Token):
    def nud(self, parser):
        if self.text not in parser.names:
            raise parser.error(f"undeclared variable '{self.text}'", self.column)
        return Node("var", (parser.names.index(self.text),), self.column)


class _Add(_Token):
    lbp = 10

    def nud(self, parser):
        return parser.expression(25)

    def led(self, parser, left):
        return Node("add", (left, parser.expression(self.lbp)), self.column)


class _Sub(_Token):
    lbp = 10

    def nud(self, parser):
        # binds looser than ^ so that -x^2 is -(x^2)
        return Node("neg", (parser.expression(25),), self.column)

    def led(self, parser, left):
        return Node("sub", (left, parser.expression(self.lbp)), self.column)


class _Mul(_Token):
    lbp = 20

    def led(self, parser, left):
        return Node("mul", (left, parser.expression(self.lbp)), self.column)


class _Div(_Token):
    lbp = 20

    def led(self, parser, left):
        right = parser.expression(self.lbp)
        divisor = parser.constant_value(right, "division is only by nonzero constants")
        if divisor == 0:
            raise parser.error("division by zero", right.column)
        return Node("div", (left, divisor), self.column)


class _Pow(_Token):
    lbp = 30

    def led(self, parser, left):
        # right associative
        right = parser.expression(self.lbp - 1)
        exponent = parser.constant_value(right, "exponents must be non-negative integers")
        if exponent.denominator != 1 or exponent < 0:
            raise parser.error("exponents must be non-negative integers", right.column)
        if exponent > MAX_EXPONENT:
            raise parser.error(f"exponent {exponent} exceeds the limit of {MAX_EXPONENT}", right.column)
        if parser.is_constant(left):
            base = parser.constant_value(left, "")
            bits = max(abs(base.numerator).bit_length(), base.denominator.bit_length())
            if bits * int(exponent) > MAX_CONSTANT_BITS:
                raise parser.error(f"constant power exceeds {MAX_CONSTANT_BITS} bits", self.column)
        return Node("pow", (left, int(exponent)), self.column)


class _LParen(_Token):
    def nud(self, parser):
        inner = parser.expression()
        if not isinstance(parser.token, _RParen):
            raise parser.error("expected ')'", parser.token.column)
        parser.advance()
        return inner


class _RParen(_Token):
    pass


class _End(_Token):
    pass


OPERATORS = {"+": _Add, "-": _Sub, "*": _Mul, "/": _Div, "^": _Pow, "(": _LParen, ")": _RParen}


class ExpressionParser:
    """
    Pratt parser for one right-hand side.

    Attributes:
        names (list): Declared variable names, in order.
        line (int): Source line, for error positions.
        offset (int): Column of the expression start within the line.
    """

    def __init__(self, text: str, names: List[str], line: int = 1, offset: int = 0) -> None:
        assert isinstance(text, str), "text must be a string."
        self.names = names
        self.line = line
        self.offset = offset
        self._tokens = self._tokenize(text)
        self.token = next(self._tokens)

    def error(self, message: str, column: int) -> MapSyntaxError:
        return MapSyntaxError(message, self.line, column)

    def _tokenize(self, text: str):
        position = 0
        for match in TOKEN_PATTERN.finditer(text):
            decimal, number, name, operator = match.groups()
            start = match.start(match.lastindex) if match.lastindex else match.end()
            column = self.offset + start + 1
            position = match.end()
            if decimal:
                raise self.error(f"non-rational literal '{decimal}', write it as a fraction", column)
            if number:
                yield _Number(column, number)
            elif name:
                yield _Name(column, name)
            elif operator in OPERATORS:
                yield OPERATORS[operator](column, operator)
            elif operator:
                raise self.error(f"unknown symbol '{operator}'", column)
        yield _End(self.offset + position + 1)

    def advance(self) -> None:
        self.token = next(self._tokens)

    def expression(self, rbp: int = 0) -> Node:
        t = self.token
        self.advance()
        left = t.nud(self)
        while rbp < self.token.lbp:
            t = self.token
            self.advance()
            left = t.led(self, left)
        return left

    def parse(self) -> Node:
        if isinstance(self.token, _End):
            raise self.error("empty expression", self.token.column)
        tree = self.expression()
        if not isinstance(self.token, _End):
            raise self.error(f"unexpected '{self.token.text}'", self.token.column)
        return tree

    def is_constant(self, node: Node) -> bool:
        if node.kind == "var":
            return False
        if node.kind in ("neg", "div", "pow"):
            return self.is_constant(node.args[0])
        if node.kind == "num":
            return True
        return self.is_constant(node.args[0]) and self.is_constant(node.args[1])

    def constant_value(self, node: Node, message: str) -> Fraction:
        """Evaluate a variable-free subtree."""
        kind, args = node.kind, node.args
        if kind == "num":
            return args[0]
        if kind == "neg":
            return -self.constant_value(args[0], message)
        if kind in ("add", "sub", "mul"):
            left = self.constant_value(args[0], message)
            right = self.constant_value(args[1], message)
            return left + right if kind == "add" else left - right if kind == "sub" else left * right
        if kind == "div":
            return self.constant_value(args[0], message) / args[1]
        if kind == "pow":
            return self.constant_value(args[0], message) ** args[1]
        raise self.error(message, node.column)


def degree_bound(node: Node) -> int:
    """Upper bound on the total degree of a parsed polynomial."""
    kind, args = node.kind, node.args
    if kind == "num":
        return 0
    if kind == "var":
        return 1
    if kind in ("neg", "div"):
        return degree_bound(args[0])
    if kind in ("add", "sub"):
        return max(degree_bound(args[0]), degree_bound(args[1]))
    if kind == "mul":
        return degree_bound(args[0]) + degree_bound(args[1])
    return degree_bound(args[0]) * args[1]


def evaluate(node: Node, nvars: int, degree: int) -> Series:
    """Evaluate a parsed expression as a series over QQ truncated at `degree`."""
    kind, args = node.kind, node.args
    if kind == "num":
        return Series.constant(args[0], nvars, degree)
    if kind == "var":
        return Series.variable(args[0], nvars, degree)
    if kind == "neg":
        return -evaluate(args[0], nvars, degree)
    if kind == "add":
        return evaluate(args[0], nvars, degree) + evaluate(args[1], nvars, degree)
    if kind == "sub":
        return evaluate(args[0], nvars, degree) - evaluate(args[1], nvars, degree)
    if kind == "mul":
        return evaluate(args[0], nvars, degree) * evaluate(args[1], nvars, degree)
    if kind == "div":
        return evaluate(args[0], nvars, degree) / args[1]
    return evaluate(args[0], nvars, degree) ** args[1]


class MapFile:
    """
    A parsed map file.

    Attributes:
        vars (list): Variable names in declaration order.
        assignments (list): Right-hand side source text, one per component.
        map (MapTuple): The map over QQ at the requested degree.
    """

    def __init__(self, vars: List[str], assignments: List[str], map: MapTuple) -> None:
        assert len(vars) == len(assignments) == map.nvars, "one assignment per variable."
        self.vars = vars
        self.assignments = assignments
        self.map = map

    @property
    def tangent_to_identity(self) -> bool:
        return self.map.is_tangent_to_identity()

    def __repr__(self) -> str:
        return f"MapFile(vars={self.vars}, map={self.map.to_text(self.vars)})"


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0]


def _component(tree: Node, name: str, nvars: int, degree: int) -> Series:
    bound = degree_bound(tree)
    if bound <= degree:
        return evaluate(tree, nvars, degree)
    if bound > MAX_CHECK_DEGREE:
        logger.warning(f"{name} may have terms above degree {degree}; they are dropped")
        return evaluate(tree, nvars, degree)
    full = evaluate(tree, nvars, bound)
    if full.max_total() > degree:
        logger.warning(f"{name} has terms up to degree {full.max_total()}; terms above degree {degree} are dropped")
    return full.truncate(degree)


def parse_map(text: str, degree: int = DEFAULT_DEGREE) -> MapFile:
    """
    Parse a map file.

    Args:
        text (str): File contents.
        degree (int): Truncation degree D of the resulting map.

    Returns:
        MapFile: Variable names, source expressions and the MapTuple.

    Raises:
        MapSyntaxError: With the 1-based line and column of the problem.
    """
    assert isinstance(text, str), "text must be a string."
    assert isinstance(degree, int) and degree >= 1, "degree must be a positive integer."

    names: Optional[List[str]] = None
    sources: List[str] = []
    components: List[Series] = []
    last_line = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        last_line = number
        if names is None:
            head, sep, rest = line.partition(":")
            if head.strip() != "vars" or not sep:
                raise MapSyntaxError("expected 'vars: <name> ...'", number, len(line) - len(line.lstrip()) + 1)
            names = rest.split()
            if not names:
                raise MapSyntaxError("no variables declared", number, len(head) + 2)
            for name in names:
                if not NAME_PATTERN.match(name):
                    raise MapSyntaxError(f"invalid variable name '{name}'", number, line.index(name) + 1)
            if len(set(names)) != len(names):
                raise MapSyntaxError("duplicate variable name", number, len(head) + 2)
            continue

        match = ASSIGNMENT_PATTERN.match(line)
        if not match:
            raise MapSyntaxError("expected 'F<k> = <expression>'", number, len(line) - len(line.lstrip()) + 1)
        k = int(match.group(1))
        expected = len(components) + 1
        if k != expected:
            raise MapSyntaxError(f"expected F{expected}, found F{k}", number, match.start(1))
        if k > len(names):
            raise MapSyntaxError(f"more assignments than the {len(names)} declared variables", number, match.start(1))
        body = line[match.end():]
        tree = ExpressionParser(body, names, line=number, offset=match.end()).parse()
        sources.append(body.strip())
        components.append(_component(tree, f"F{k}", len(names), degree))

    if names is None:
        raise MapSyntaxError("missing 'vars:' line", max(last_line, 1), 1)
    if len(components) != len(names):
        raise MapSyntaxError(
            f"{len(names)} variables declared but {len(components)} assignments given",
            max(last_line, 1),
            1,
        )
    result = MapFile(names, sources, MapTuple(components))
    logger.info(f"parsed map on {len(names)} variables at degree {degree} (F_1: {result.tangent_to_identity})")
    return result


def read_map(path: str, degree: int = DEFAULT_DEGREE) -> MapFile:
    """Read and parse a map file from disk."""
    assert isinstance(path, str), "path must be a string."
    with open(path, "r") as handle:
        return parse_map(handle.read(), degree)


def format_map(F: MapTuple, names: Optional[List[str]] = None) -> str:
    """Render a map over QQ in the map file grammar; parse_map reads it back."""
    assert isinstance(F, MapTuple), "F must be a MapTuple."
    assert F.ring is QQ, "only maps over QQ can be written as map files."
    if names is None:
        names = [f"z{k + 1}" for k in range(F.nvars)]
    lines = ["vars: " + " ".join(names)]
    for k, component in enumerate(F, start=1):
        lines.append(f"F{k} = {component.to_text(names)}")
    return "\n".join(lines) + "\n"
