"""Reduce the Heisenberg group mod 5, enumerate the image and inspect the kernel."""

from titsalt.congruence import build_whom
from titsalt.finite_image import compute_kernel
from titsalt.io import load_corpus
from titsalt.matrix import is_unipotent

G = load_corpus("heisenberg")
psi = build_whom(G.generators, prime=5)
print("target field:", psi.target.describe(), "| certificate clause:", psi.certificate.clause)
for g in G.generators:
    print(g.to_strings(), "->", psi(g).to_strings())

kd = compute_kernel(G.generators, psi)
for key, value in kd.summary().items():
    print(f"{key:32s} {value}")

# every normal generator of the congruence kernel is unipotent here
print("all kernel generators unipotent:", all(is_unipotent(k) for k in kd.generators))
print("first generator:", kd.generators[0].to_strings())
