"""Print the verdict table for the bundled corpus."""

import time

from titsalt.decision import PROPERTIES, Analysis, decide
from titsalt.io import corpus_names, load_corpus

short = {p: "".join(w[0] for w in p.split("-")) for p in PROPERTIES}
print(f"{'group':18s}" + "".join(f"{short[p]:>6s}" for p in PROPERTIES) + "   seconds")
for name in corpus_names():
    G = load_corpus(name)
    t = time.perf_counter()
    an = Analysis(G.generators)
    row = [decide(p, an).verdict for p in PROPERTIES]
    print(f"{name:18s}" + "".join(f"{v[0]:>6s}" for v in row) + f"   {time.perf_counter() - t:7.2f}")
print("t = true, f = false, u = undecided")
