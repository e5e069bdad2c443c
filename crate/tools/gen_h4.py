"""Write the linear H4 (STO-3G) qubit Hamiltonian under the Jordan-Wigner map.

Spin orbitals are interleaved (2p alpha, 2p+1 beta) and qubit 0 is the
leftmost character of each Pauli string.

    python3 tools/gen_h4.py [bond_angstrom] > fixtures/h4_sto3g.txt
"""

import itertools
import sys

import numpy as np
from pyscf import ao2mo, gto, scf

CUTOFF = 1e-7
# Single-qubit products: (a, b) -> (phase, a*b)
MUL = {
    ("I", p): (1, p) for p in "IXYZ"
}
MUL.update({(p, "I"): (1, p) for p in "XYZ"})
MUL.update({(p, p): (1, "I") for p in "XYZ"})
MUL.update({("X", "Y"): (1j, "Z"), ("Y", "Z"): (1j, "X"), ("Z", "X"): (1j, "Y")})
MUL.update({("Y", "X"): (-1j, "Z"), ("Z", "Y"): (-1j, "X"), ("X", "Z"): (-1j, "Y")})


def mul(a, b):
    out = {}
    for (sa, ca), (sb, cb) in itertools.product(a.items(), b.items()):
        phase = ca * cb
        chars = []
        for x, y in zip(sa, sb):
            ph, z = MUL[(x, y)]
            phase *= ph
            chars.append(z)
        key = "".join(chars)
        out[key] = out.get(key, 0) + phase
    return out


def ladder(j, n, dagger):
    z = "Z" * j
    rest = "I" * (n - j - 1)
    sign = -0.5j if dagger else 0.5j
    return {z + "X" + rest: 0.5, z + "Y" + rest: sign}


def main():
    r = float(sys.argv[1]) if len(sys.argv) > 1 else 0.4
    mol = gto.M(atom=[("H", (0, 0, i * r)) for i in range(4)], basis="sto-3g", unit="Angstrom", verbose=0)
    mf = scf.RHF(mol).run()
    c = mf.mo_coeff
    norb = c.shape[1]
    h1 = c.T @ mf.get_hcore() @ c
    eri = ao2mo.restore(1, ao2mo.kernel(mol, c), norb)
    n = 2 * norb
    up = [ladder(j, n, True) for j in range(n)]
    dn = [ladder(j, n, False) for j in range(n)]
    total = {"I" * n: mol.energy_nuc()}

    def add(op, w):
        for k, v in op.items():
            total[k] = total.get(k, 0) + w * v

    for p, q in itertools.product(range(norb), repeat=2):
        if abs(h1[p, q]) > 1e-14:
            for s in (0, 1):
                add(mul(up[2 * p + s], dn[2 * q + s]), h1[p, q])
    for p, q, r_, s_ in itertools.product(range(norb), repeat=4):
        g = eri[p, q, r_, s_]
        if abs(g) < 1e-14:
            continue
        for a, b in itertools.product((0, 1), repeat=2):
            i, j, k, l = 2 * p + a, 2 * r_ + b, 2 * s_ + b, 2 * q + a
            if i == j or k == l:
                continue
            add(mul(mul(up[i], up[j]), mul(dn[k], dn[l])), 0.5 * g)
    terms = sorted((k, v) for k, v in total.items() if abs(v) > CUTOFF)
    assert max(abs(v.imag) for _, v in terms) < 1e-12
    print(f"# linear H4, spacing {r} angstrom, STO-3G, Jordan-Wigner, |c| > {CUTOFF:g}")
    print(f"# RHF energy {mf.e_tot:.12f}")
    for k, v in terms:
        print(f"{k} {v.real:.16e}")


if __name__ == "__main__":
    main()
