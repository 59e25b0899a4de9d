"""Tiny arithmetic expression language for config-file problem data.

Accepts numbers, the named variables, ``pi``, ``e``, the operators
``+ - * / ** ^`` and the functions below. Expressions are parsed once with
:mod:`ast` and evaluated with numpy on arrays of points.
"""

import ast
import operator

import numpy as np

FUNCTIONS = {
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "abs": np.abs,
}
CONSTANTS = {"pi": np.pi, "e": np.e}

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}
_UNOPS = {ast.USub: operator.neg, ast.UAdd: operator.pos}

VARIABLES_2D = ("s", "t")
VARIABLES_3D = ("s1", "s2", "s3")


class ExpressionError(ValueError):
    pass


class Expression:
    """A parsed expression over a fixed set of variable names."""

    def __init__(self, text, variables):
        self.text = text.strip()
        self.variables = tuple(variables)
        try:
            tree = ast.parse(self.text.replace("^", "**"), mode="eval")
        except SyntaxError as exc:
            raise ExpressionError(f"cannot parse {self.text!r}: {exc.msg}") from None
        self._check(tree.body)
        self._tree = tree.body

    def _check(self, node):
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            self._check(node.left)
            self._check(node.right)
        elif isinstance(node, ast.UnaryOp) and type(node.op) in _UNOPS:
            self._check(node.operand)
        elif isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            pass
        elif isinstance(node, ast.Name):
            if node.id not in self.variables and node.id not in CONSTANTS:
                allowed = ", ".join(self.variables + tuple(CONSTANTS))
                raise ExpressionError(f"unknown name {node.id!r} in {self.text!r} (allowed: {allowed})")
        elif isinstance(node, ast.Call):
            if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
                raise ExpressionError(f"unsupported function call in {self.text!r}")
            if len(node.args) != 1 or node.keywords:
                raise ExpressionError(f"{node.func.id} takes exactly one argument")
            self._check(node.args[0])
        else:
            raise ExpressionError(f"unsupported syntax {type(node).__name__} in {self.text!r}")

    def _eval(self, node, env):
        if isinstance(node, ast.BinOp):
            return _BINOPS[type(node.op)](self._eval(node.left, env), self._eval(node.right, env))
        if isinstance(node, ast.UnaryOp):
            return _UNOPS[type(node.op)](self._eval(node.operand, env))
        if isinstance(node, ast.Constant):
            return float(node.value)
        if isinstance(node, ast.Name):
            return env[node.id] if node.id in env else CONSTANTS[node.id]
        return FUNCTIONS[node.func.id](self._eval(node.args[0], env))

    def evaluate(self, columns):
        """Evaluate with ``columns`` a mapping from variable name to array."""
        return self._eval(self._tree, columns)

    def on_points(self, pts, extra=None):
        """Evaluate on points of shape (P, k), variables bound to columns in order."""
        pts = np.asarray(pts, dtype=float)
        env = {name: pts[:, i] for i, name in enumerate(self.variables[: pts.shape[1]])}
        if extra:
            env.update(extra)
        out = self.evaluate(env)
        return np.broadcast_to(np.asarray(out, dtype=float), (pts.shape[0],)).copy()

    def __str__(self):
        return self.text

    def __repr__(self):
        return f"Expression({self.text!r})"

    def __eq__(self, other):
        return isinstance(other, Expression) and ast.dump(self._tree) == ast.dump(other._tree)

    def __hash__(self):
        return hash(ast.dump(self._tree))


def point_function(text, d):
    """Callable f(s) on physical points for the variables of dimension d."""
    expr = Expression(text, VARIABLES_2D if d == 2 else VARIABLES_3D)
    return expr.on_points


def flux_function(text, d):
    """Callable g(s, normal); the normal components are n1, n2 (, n3)."""
    base = VARIABLES_2D if d == 2 else VARIABLES_3D
    normals = tuple(f"n{i + 1}" for i in range(d))
    expr = Expression(text, base + normals)

    def g(s, normal):
        extra = {name: normal[:, i] for i, name in enumerate(normals)}
        return expr.on_points(s, extra)

    return g
