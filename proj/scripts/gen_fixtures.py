#!/usr/bin/env python3
# Copyright 2026 The gsw Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes the bundled .qcd geometry-scan fixtures with PySCF (STO-3G).

This is a development helper for regenerating files under data/; the C++
workbench never calls it.

    python3 scripts/gen_fixtures.py --out data
"""
import argparse
import json
import math
import os

import numpy as np
from pyscf import ao2mo, gto, scf

BOHR = "Bohr"


def h2_geometry(params):
    (delta,) = params
    r = H2_EQ + delta
    return [("H", (0.0, 0.0, -r / 2)), ("H", (0.0, 0.0, r / 2))]


def h4_geometry(params):
    (delta,) = params
    a = H4_SIDES[0] + delta
    b = H4_SIDES[1] + delta
    return [("H", (x, y, 0.0)) for x in (-a / 2, a / 2) for y in (-b / 2, b / 2)]


def h3plus_geometry(params):
    theta, d = params
    return [
        ("H", (0.0, 0.0, 0.0)),
        ("H", (d * math.cos(theta / 2), d * math.sin(theta / 2), 0.0)),
        ("H", (d * math.cos(theta / 2), -d * math.sin(theta / 2), 0.0)),
    ]


def make_mol(atoms, charge):
    return gto.M(atom=atoms, basis="sto-3g", unit=BOHR, charge=charge, spin=0,
                 verbose=0)


def rhf_equilibrium_h2():
    best = None
    for r in np.arange(1.2, 1.5, 0.0005):
        mol = make_mol([("H", (0, 0, 0)), ("H", (0, 0, r))], 0)
        e = scf.RHF(mol).kernel()
        if best is None or e < best[1]:
            best = (r, e)
    return round(best[0], 4)


def align_signs(coeff, prev, cross):
    if prev is None:
        return coeff
    coeff = coeff.copy()
    for k in range(coeff.shape[1]):
        if prev[:, k] @ cross @ coeff[:, k] < 0:
            coeff[:, k] *= -1
    return coeff


def run_scf(mol, method, guess_dm):
    if method == "RHF":
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        e = mf.kernel(dm0=guess_dm)
        return mf, e, [mf.mo_coeff, mf.mo_coeff]
    mf = scf.UHF(mol)
    mf.conv_tol = 1e-12
    if guess_dm is None:
        # break spin symmetry so stretched geometries reach the broken solution
        dm = mf.get_init_guess()
        na = mol.nelectron // 2
        rhf = scf.RHF(mol)
        rhf.kernel()
        c = rhf.mo_coeff.copy()
        ca, cb = c.copy(), c.copy()
        t = math.pi / 4
        homo, lumo = na - 1, na
        ca[:, [homo, lumo]] = c[:, [homo, lumo]] @ np.array(
            [[math.cos(t), -math.sin(t)], [math.sin(t), math.cos(t)]])
        cb[:, [homo, lumo]] = c[:, [homo, lumo]] @ np.array(
            [[math.cos(t), math.sin(t)], [-math.sin(t), math.cos(t)]])
        occ = np.zeros(c.shape[1])
        occ[:na] = 1
        dm = np.array([ca @ np.diag(occ) @ ca.T, cb @ np.diag(occ) @ cb.T])
        guess_dm = dm
    e = mf.kernel(dm0=guess_dm)
    for _ in range(10):
        mo_new, _, stable, _ = mf.stability(return_status=True)
        if stable:
            break
        dm = mf.make_rdm1(mo_new, mf.mo_occ)
        e = mf.kernel(dm0=dm)
    return mf, e, [mf.mo_coeff[0], mf.mo_coeff[1]]


def spin_orbital_integrals(mol, coeffs):
    hcore = mol.intor("int1e_kin") + mol.intor("int1e_nuc")
    nmo = coeffs[0].shape[1]
    nso = 2 * nmo
    h1 = np.zeros((nso, nso))
    for s in (0, 1):
        hs = coeffs[s].T @ hcore @ coeffs[s]
        h1[s::2, s::2] = hs
    h2 = np.zeros((nso, nso, nso, nso))
    for s in (0, 1):
        for t in (0, 1):
            eri = ao2mo.general(mol, (coeffs[s], coeffs[s], coeffs[t], coeffs[t]),
                                compact=False).reshape(nmo, nmo, nmo, nmo)
            # h[p q r s] = (p s | q r) with spin(p)=spin(s)=s, spin(q)=spin(r)=t
            h2[s::2, t::2, t::2, s::2] = eri.transpose(0, 2, 3, 1)
    return h1, h2


def fmt(x):
    return float("%.17g" % x)


def scan(name, geometry, charge, grid, method, param_names):
    records = []
    prev_c = [None, None]
    prev_mol = None
    prev_dm = None
    for params in grid:
        mol = make_mol(geometry(params), charge)
        mf, e, coeffs = run_scf(mol, method, prev_dm)
        if not mf.converged:
            print(f"  skipping {params}: SCF not converged")
            continue
        if prev_mol is not None:
            cross = gto.intor_cross("int1e_ovlp", prev_mol, mol)
            coeffs = [align_signs(coeffs[s], prev_c[s], cross) for s in (0, 1)]
        prev_c, prev_mol, prev_dm = coeffs, mol, mf.make_rdm1()
        h1, h2 = spin_orbital_integrals(mol, coeffs)
        nso = h1.shape[0]
        records.append({
            "params": [fmt(p) for p in params],
            "core_energy": fmt(mol.energy_nuc()),
            "scf_energy": fmt(e),
            "h1": [fmt(v) for v in h1.reshape(-1)],
            "h2": [fmt(v) for v in h2.reshape(-1)],
        })
        print(f"  {name} {method} {params} E_scf={e:.10f}")
    return {
        "molecule": name,
        "basis": "sto-3g",
        "scf_method": method,
        "parameter_names": param_names,
        "n_spin_orbitals": nso,
        "n_electrons": mol.nelectron,
        "records": records,
    }


def write(path, dataset):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(dataset, f, separators=(",", ":"))
        f.write("\n")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="data")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)

    global H2_EQ, H4_SIDES
    H2_EQ = rhf_equilibrium_h2()
    H4_SIDES = (H2_EQ, 2.0)
    print(f"H2 RHF equilibrium bond length: {H2_EQ} Bohr")

    grid = [(round(-0.3 + 0.1 * k, 10),) for k in range(44)]
    write(os.path.join(args.out, "h2_sto3g_rhf.qcd"),
          scan("H2", h2_geometry, 0, grid, "RHF", ["delta_H"]))

    grid = [(round(-0.2 + 0.1 * k, 10),) for k in range(33)]
    for method in ("RHF", "UHF"):
        write(os.path.join(args.out, f"h4_sto3g_{method.lower()}.qcd"),
              scan("H4", h4_geometry, 0, grid, method, ["delta_H"]))

    thetas = [math.radians(a) for a in range(40, 101, 10)]
    dists = [round(1.2 + 0.2 * k, 10) for k in range(8)]
    grid = [(t, d) for t in thetas for d in dists]
    write(os.path.join(args.out, "h3plus_sto3g_rhf.qcd"),
          scan("H3plus", h3plus_geometry, 1, grid, "RHF", ["theta_H", "delta_H"]))


if __name__ == "__main__":
    main()
