"""Time the compiled kernels against the numpy fallback on the package's real workloads.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]

Each row also checks that both backends return identical results.
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from scatterforge import codes, construction, geometry, kernels
from scatterforge.field import build_tower


def workloads(quick: bool):
    T25 = build_tower(2, 1, 5, with_q2m=True)
    T35 = build_tower(3, 1, 5)
    U25 = construction.build_U_sigma(construction.ConstructionParams(T25, 1))
    U35 = construction.build_U_sigma(construction.ConstructionParams(T35, 1))

    vecs35 = U35.vectors()[1:]
    yield "projective_index q=3 m=5", lambda K: K.projective_index(vecs35, T35.Fqm)

    mult = geometry.point_multiplicities(U35)
    pts = np.nonzero(mult)[0]
    yield "line_incidence q=3 m=5", lambda K: K.line_incidence(pts, mult[pts], T35.Fqm)

    C35 = codes.psi(U35)
    words = C35.encode(codes.projective_reps(T35.Q, 3))
    yield "batch_support q=3 m=5 (59293 codewords)", lambda K: K.batch_support(words, T35.Fqm)

    lpts = [p for p, _ in geometry.linear_set_points(U25)]
    if quick:
        lpts = lpts[:40]
    yield f"saturation_cover q=2 m=5 -> 2^10 ({len(lpts)} points)", lambda K: K.saturation_cover(lpts, T25.Fq2m)

    dual = codes.dual_code(codes.psi(U25))
    rng = random.Random(0)
    target = np.array([rng.randrange(32) for _ in range(7)], dtype=np.int64)
    G = dual.G()[:3] if quick else dual.G()
    yield f"coset_min_rank [7,{len(G)}] over F_32", lambda K: K.coset_min_rank(target, G, T25.Fqm)


def _same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller saturation and coset workloads")
    args = ap.parse_args()

    names = kernels.available_backends()
    backends = {n: kernels.get_backend(n) for n in names}
    print(f"{'workload':48s}" + "".join(f"{n:>12s}" for n in names) + "   speedup  agree")
    for label, fn in workloads(args.quick):
        best, outs = {}, {}
        for n, K in backends.items():
            times = []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                outs[n] = fn(K)
                times.append(time.perf_counter() - t0)
            best[n] = min(times)
        agree = all(_same(outs[names[0]], outs[n]) for n in names[1:])
        speed = f"{best['python'] / best['cython']:8.1f}x" if "cython" in best else "       -"
        print(f"{label:48s}" + "".join(f"{best[n]:11.4f}s" for n in names) + f"  {speed}  {agree}")


if __name__ == "__main__":
    main()
