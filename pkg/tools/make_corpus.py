"""Regenerate the bundled corpus JSON files."""

import json
from pathlib import Path

from titsalt.fields import QQ, FunctionField
from titsalt.matrix import Matrix

OUT = Path(__file__).resolve().parents[1] / "src" / "titsalt" / "corpus"

Q = {"type": "rationals"}


def write(name, field, gens, overrides=None):
    n = len(gens[0])
    data = {"field": field, "n": n, "generators": gens}
    if overrides:
        data["overrides"] = overrides
    mats = ",\n".join(
        "    [\n" + ",\n".join("      " + json.dumps(r) for r in g) + "\n    ]" for g in gens)
    lines = ["{", f'  "field": {json.dumps(field)},', f'  "n": {n},', '  "generators": [', mats, "  ]"]
    if overrides:
        lines[-1] += ","
        lines.append(f'  "overrides": {json.dumps(overrides)}')
    lines.append("}")
    (OUT / f"{name}.json").write_text("\n".join(lines) + "\n")


def monomial():
    L = FunctionField(QQ, "x")
    c = Matrix.parse(L, [["1", "x", "0"], ["0", "1", "x"], ["0", "0", "1"]])
    ci = c.inverse()
    base = [
        [["2", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        [["1", "0", "0"], ["0", "-1", "0"], ["0", "0", "1"]],
        [["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]],
    ]
    gens = [(ci * Matrix.parse(L, g) * c).to_strings() for g in base]
    write("monomial", {"type": "function_field", "base": Q, "var": "x"}, gens)


def kronecker():
    a = [[1, 1], [0, 1]]
    b = [[1, 0], [2, 1]]
    one = [[1, 0], [0, 1]]
    d = [["1+a", "0"], ["0", "1"]]

    def kron(A, B):
        return [[f"({A[i // 2][j // 2]})*({B[i % 2][j % 2]})" for j in range(4)] for i in range(4)]

    gens = [kron(a, one), kron(b, one), kron(one, d)]
    K = {"type": "number_field", "poly": [1, 0, 1], "var": "a"}
    write("kronecker", K, [[[simplify(K, e) for e in r] for r in g] for g in gens])


def simplify(K, e):
    from titsalt.io import field_from_json

    F = field_from_json(K)
    return F.format(F.parse(e))


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    monomial()
    y = "x^6"
    write("triangular_gf19", {"type": "function_field", "base": {"type": "finite_field", "p": 19}, "var": "x"}, [
        [[y, f"{y} - 1", "0"], ["0", "1", f"{y} - 1"], ["0", "0", "1"]],
        [["1", "0", f"{y} - 1"], ["0", "x^12", "0"], ["0", "0", "1"]],
        [["-1", "0", "0"], ["0", "1", "0"], ["0", "0", f"-{y}"]],
        [["1", y, "0"], ["0", "-1", "0"], ["0", "0", "1"]],
    ])
    write("sl2z", Q, [[["1", "1"], ["0", "1"]], [["0", "1"], ["-1", "0"]]])
    write("sl3z", Q, [[["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]],
                      [["0", "1", "0"], ["0", "0", "1"], ["1", "0", "0"]]])
    kronecker()
    write("bs12", Q, [[["2", "0"], ["0", "1"]], [["1", "1"], ["0", "1"]]])
    write("heisenberg", Q, [[["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]],
                            [["1", "0", "0"], ["0", "1", "1"], ["0", "0", "1"]]])
    write("scalar", Q, [[["0", "1"], ["-1", "0"]], [["0", "1"], ["1", "0"]], [["2", "0"], ["0", "2"]]])
    write("monomial_q", Q, [[["2", "0"], ["0", "3"]], [["0", "1"], ["1", "0"]]])
    write("free_pair", Q, [[["1", "2"], ["0", "1"]], [["1", "0"], ["2", "1"]]])
    write("noncentral", Q, [[["1", "1"], ["0", "1"]], [["1", "0"], ["0", "-1"]]])
    write("sl2_gf5_const", {"type": "function_field", "base": {"type": "finite_field", "p": 5}, "var": "x"},
          [[["1", "1"], ["0", "1"]], [["1", "0"], ["1", "1"]]])
    write("sqrt_x", {"type": "alg_function_field", "base": {"type": "function_field", "base": Q, "var": "x"},
                     "poly": ["-x", "0", "1"], "var": "b"},
          [[["b", "0"], ["0", "1"]], [["1", "x"], ["0", "1"]]])
