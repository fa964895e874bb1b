#!/usr/bin/env python3
"""Brute-force reference energies for small fermion files.

Builds the dense matrix of a fermion-file Hamiltonian in the Jordan-Wigner
basis (qubit k = mode k) and reports the ground energy, the ground energy
restricted to a fixed electron number, and the Hartree-Fock energy. Any
number printed in the docs for the bundled toy systems comes from here.

Usage: tools/exact_energy.py data/toy4.ferm [n_electrons]
"""
import sys

import numpy as np


def parse(path):
    modes = None
    terms = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            if line[0] == "modes":
                modes = int(line[1])
                continue
            re_c, im_c = float(line[0]), float(line[1])
            assert line[2] == ":", f"bad line: {raw!r}"
            ops = []
            for tok in line[3:]:
                creation = tok.endswith("^")
                ops.append((int(tok.rstrip("^")), creation))
            terms.append((complex(re_c, im_c), ops))
    assert modes is not None, "missing `modes` header"
    return modes, terms


def ladder(mode, creation, n):
    dim = 1 << n
    op = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        occupied = (col >> mode) & 1
        if creation == bool(occupied):
            continue
        row = col ^ (1 << mode)
        sign = (-1) ** bin(col & ((1 << mode) - 1)).count("1")
        op[row, col] = sign
    return op


def dense_hamiltonian(modes, terms):
    dim = 1 << modes
    h = np.zeros((dim, dim), dtype=complex)
    for coeff, ops in terms:
        m = np.eye(dim, dtype=complex)
        for mode, creation in ops:
            m = m @ ladder(mode, creation, modes)
        h += coeff * m
    return h


def main():
    path = sys.argv[1]
    modes, terms = parse(path)
    h = dense_hamiltonian(modes, terms)
    assert np.abs(h - h.conj().T).max() < 1e-12, "hamiltonian is not Hermitian"
    evals, evecs = np.linalg.eigh(h)
    print(f"modes                 : {modes}")
    print(f"ground energy         : {evals[0]:.12f}")
    if len(sys.argv) > 2:
        n_elec = int(sys.argv[2])
        number = sum(
            np.diag([(i >> k) & 1 for i in range(1 << modes)]) for k in range(modes)
        )
        mask = [
            abs(vec @ number @ vec - n_elec) < 1e-9
            for vec in (evecs[:, i] for i in range(len(evals)))
        ]
        sector = [e for e, keep in zip(evals, mask) if keep]
        print(f"ground with N={n_elec}     : {min(sector):.12f}")
        hf = int("1" * n_elec, 2)
        print(f"Hartree-Fock <H>      : {h[hf, hf].real:.12f}")


if __name__ == "__main__":
    main()
