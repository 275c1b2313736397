"""Numerical membership oracle in a faithful unitary representation.

A tuple of alcove points is feasible when the identity can be written as a
product of matrices drawn from the corresponding conjugacy classes.  The
oracle searches for a witness by seeded random restarts plus Riemannian
gradient descent over the conjugating unitaries, then polishes the best
candidates by cyclically re-solving one factor at a time from the
eigenvectors of what the other factors force it to be.

The search is one-sided: a witness below tolerance certifies feasibility,
failure to find one proves nothing.  The SU(2) case also has an exact
closed form (the odd-subset inequalities) used as a cross-check.
"""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .root_system import RootSystem, build_root_system

__all__ = [
    "GroupRep", "group_rep", "rep_for_root_system", "phases_exact",
    "class_matrix", "OracleVerdict", "numeric_membership",
    "su2_reference_membership",
]

_GROUPS = {
    "SU2": ("A", 1, 2),
    "SU3": ("A", 2, 3),
    "SU4": ("A", 3, 4),
    "Sp4": ("C", 2, 4),
}

_BY_ROOT_SYSTEM = {(t, r): label for label, (t, r, _) in _GROUPS.items()}

_J4 = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])


@dataclass(frozen=True)
class GroupRep:
    """A compact group given by its defining matrix representation."""
    label: str
    rs: RootSystem
    dim: int


def group_rep(label) -> GroupRep:
    if label not in _GROUPS:
        raise ValueError(f"unknown group {label!r}; choose from {sorted(_GROUPS)}")
    t, r, dim = _GROUPS[label]
    return GroupRep(label, build_root_system(t, r), dim)


def rep_for_root_system(rs: RootSystem) -> GroupRep:
    key = (rs.type_label, rs.rank)
    if key not in _BY_ROOT_SYSTEM:
        raise ValueError(f"no unitary model wired for {rs.type_label}{rs.rank}")
    return group_rep(_BY_ROOT_SYSTEM[key])


def phases_exact(rep: GroupRep, pt):
    """Exact rational exponents e_i of the class representative
    Exp(2 pi i mu) = diag(exp(2 pi i e_i)), from the alcove coordinates."""
    m = [Fraction(c) for c in pt.coords]
    if rep.label.startswith("SU"):
        # partial sums of the m_j give the diagonal before recentering
        s = [sum(m[i:], Fraction(0)) for i in range(len(m))] + [Fraction(0)]
        mean = sum(s) / rep.dim
        return tuple(v - mean for v in s)
    # Sp4: coordinates on the two standard phases, then their negatives
    e1 = m[0] + m[1] / 2
    e2 = m[1] / 2
    return (e1, e2, -e1, -e2)


def class_matrix(rep: GroupRep, pt):
    """The diagonal class representative as a complex matrix."""
    return np.diag(np.exp(2j * np.pi * np.array(
        [float(e) for e in phases_exact(rep, pt)])))


@dataclass(frozen=True)
class OracleVerdict:
    feasible: bool
    residual: float


def _expm_skew(s):
    """exp of batched skew-Hermitian matrices via the Hermitian eigensolver."""
    h = -1j * s
    lam, v = np.linalg.eigh(h)
    phase = np.exp(1j * lam)
    return (v * phase[..., None, :]) @ np.conj(np.swapaxes(v, -1, -2))


def _dagger(a):
    return np.conj(np.swapaxes(a, -1, -2))


def _sp_project(s):
    # tangent projection onto the symplectic subalgebra
    return 0.5 * (s + _J4 @ np.swapaxes(s, -1, -2) @ _J4)


def _conjugate(us, ds):
    # us: (r, n, N, N), ds: (n, N) diagonal phases -> class matrices (r, n, N, N)
    return (us * ds[None, :, None, :]) @ _dagger(us)


def _residual_sq(mats):
    r, n, big = mats.shape[0], mats.shape[1], np.eye(mats.shape[-1])
    p = mats[:, 0]
    for k in range(1, n):
        p = p @ mats[:, k]
    diff = p - big
    return np.sum(np.abs(diff) ** 2, axis=(-2, -1))


def _descent(rep, ds, restarts, seed, iters, stop_below):
    """Batched gradient descent; returns (values, unitaries) sorted best first."""
    n, bigN = ds.shape
    children = np.random.SeedSequence(seed).spawn(restarts)
    inits = []
    for child in children:
        rng = np.random.default_rng(child)
        z = rng.standard_normal((n, bigN, bigN)) + 1j * rng.standard_normal((n, bigN, bigN))
        inits.append(z)
    h = np.stack(inits)
    s = 0.5 * (h - _dagger(h))
    if rep.label == "Sp4":
        s = _sp_project(s)
    us = _expm_skew(s)

    eye = np.eye(bigN)
    eta = np.full(restarts, 0.2)
    mats = _conjugate(us, ds)
    f = _residual_sq(mats)
    for _ in range(iters):
        if np.min(f) < stop_below:
            break
        # prefix and suffix products around each factor
        pre = [np.broadcast_to(eye, mats[:, 0].shape)]
        for k in range(n - 1):
            pre.append(pre[-1] @ mats[:, k])
        suf = [np.broadcast_to(eye, mats[:, 0].shape)]
        for k in range(n - 1, 0, -1):
            suf.append(mats[:, k] @ suf[-1])
        suf.reverse()
        pm1d = _dagger(pre[-1] @ mats[:, -1] - eye)

        grads = []
        norm2 = np.zeros(restarts)
        for k in range(n):
            m = suf[k] @ pm1d @ pre[k]
            c = mats[:, k] @ m - m @ mats[:, k]
            g = 0.5 * (_dagger(c) - c)
            if rep.label == "Sp4":
                g = _sp_project(g)
            grads.append(g)
            norm2 += np.sum(np.abs(g) ** 2, axis=(-2, -1))
        grad = np.stack(grads, axis=1)

        # backtracking: halve the step until the Armijo bound holds
        active = np.ones(restarts, dtype=bool)
        new_us, new_f = us, f
        for _ in range(10):
            if not np.any(active):
                break
            step = _expm_skew(-eta[:, None, None, None] * grad)
            cand_us = step @ us
            cand_f = _residual_sq(_conjugate(cand_us, ds))
            good = cand_f <= f - 1e-4 * eta * norm2
            take = active & good
            new_us = np.where(take[:, None, None, None], cand_us, new_us)
            new_f = np.where(take, cand_f, new_f)
            active = active & ~good
            eta = np.where(active, eta / 2, eta)
        us, f = new_us, np.minimum(new_f, f)
        eta = np.where(~active, np.minimum(eta * 1.5, 2.0), eta)
        mats = _conjugate(us, ds)
        f = _residual_sq(mats)

    order = np.argsort(f)
    return f[order], us[order]


def _match_eigs(vals, targets):
    """Greedy assignment of computed eigenvalues to target phases; returns
    (permutation, worst angular error)."""
    used = [False] * len(vals)
    perm, worst = [], 0.0
    for t in targets:
        best_j, best_err = None, None
        for j, v in enumerate(vals):
            if used[j]:
                continue
            err = abs(np.angle(v / t))
            if best_err is None or err < best_err:
                best_j, best_err = j, err
        used[best_j] = True
        perm.append(best_j)
        worst = max(worst, best_err)
    return perm, worst


def _rebuild_factor(rep, target, diag):
    """The class member nearest to the unitary `target`: keep its
    eigenvectors, replace its eigenvalues by the prescribed phases.
    Returns None when the spectra are too far apart to match."""
    vals, vecs = np.linalg.eig(target)
    perm, worst = _match_eigs(vals, diag)
    if worst > 0.5:
        return None
    v = vecs[:, perm]
    if rep.label == "Sp4":
        # symplectic frame: the second pair of columns is forced by the
        # first, keeping the form exactly
        v1 = v[:, 0] / np.linalg.norm(v[:, 0])
        v2 = v[:, 1] - (np.conj(v1) @ v[:, 1]) * v1
        v2 = v2 / np.linalg.norm(v2)
        u = np.stack([v1, v2, -_J4 @ np.conj(v1), -_J4 @ np.conj(v2)], axis=1)
    else:
        u, _ = np.linalg.qr(v)
    return (u * diag[None, :]) @ np.conj(u.T)


def _polish(rep, ds, mats, cycles):
    """Cyclic exact-resolve: replace one factor at a time by the nearest
    class member to what the others force, keeping the best product seen."""
    n = len(ds)
    eye = np.eye(rep.dim)
    mats = [np.array(m) for m in mats]

    def res():
        p = eye
        for m in mats:
            p = p @ m
        return float(np.linalg.norm(p - eye))

    best = res()
    best_mats = [m.copy() for m in mats]
    stalls = 0
    for _ in range(cycles):
        for k in range(n):
            left = eye
            for j in range(k):
                left = left @ mats[j]
            right = eye
            for j in range(k + 1, n):
                right = right @ mats[j]
            target = np.conj(left.T) @ np.conj(right.T)
            nxt = _rebuild_factor(rep, target, ds[k])
            if nxt is not None:
                mats[k] = nxt
        cur = res()
        if cur < best:
            best = cur
            best_mats = [m.copy() for m in mats]
            stalls = 0
        else:
            stalls += 1
        if best < 1e-14 or stalls >= 3:
            break
    return best, best_mats


def _valid_witness(rep, mats, ds):
    """Witness sanity: unitary, right spectrum came by construction; for
    Sp4 the symplectic form must be preserved to close to machine precision."""
    for m in mats:
        if np.linalg.norm(np.conj(m.T) @ m - np.eye(rep.dim)) > 1e-9:
            return False
        if rep.label == "Sp4" and np.linalg.norm(m.T @ _J4 @ m - _J4) > 1e-8:
            return False
    return True


def numeric_membership(rep: GroupRep, points, tol=1e-8, restarts=200,
                       seed=0, iters=150, polish_cycles=60) -> OracleVerdict:
    """Search for unitaries U_k with prod_k U_k Exp(2 pi i mu_k) U_k^-1 = I.

    Feasible iff some restart, after polish, reaches a residual below tol;
    the reported residual is the best Frobenius distance found.  The whole
    run is deterministic for a fixed (seed, restarts, iters) triple.
    """
    points = tuple(points)
    rs = rep.rs
    for k, p in enumerate(points):
        if not rs.in_alcove(p):
            raise ValueError(f"point {k + 1} is not in the fundamental alcove")
    exact = [phases_exact(rep, p) for p in points]

    # a central class is a scalar and conjugation cannot move it; when all
    # classes are central the residual is a closed-form number
    if all(len({e % 1 for e in row}) == 1 for row in exact):
        frac = sum(row[0] % 1 for row in exact) % 1
        if frac == 0:
            return OracleVerdict(0.0 < tol, 0.0)
        z = np.exp(2j * np.pi * float(frac))
        residual = float(abs(z - 1) * np.sqrt(rep.dim))
        return OracleVerdict(residual < tol, residual)

    ds = np.array([[np.exp(2j * np.pi * float(e)) for e in row] for row in exact])
    # descent only needs to land inside the polish basin
    vals, us = _descent(rep, ds, restarts, seed, iters,
                        stop_below=max((tol * 1e-2) ** 2, 1e-8))

    best = float(np.sqrt(vals[0]))
    top = min(10, len(vals))
    for r in range(top):
        mats = _conjugate(us[r:r + 1], ds)[0]
        residual, polished = _polish(rep, ds, list(mats), polish_cycles)
        if residual < best and _valid_witness(rep, polished, ds):
            best = residual
        if best < tol * 1e-2:
            break
    return OracleVerdict(best < tol, best)


def su2_reference_membership(ts) -> bool:
    """Closed form for SU(2): feasible iff every odd subset S satisfies
    sum_S t - sum_out t <= (|S| - 1) / 2."""
    ts = [Fraction(t) for t in ts]
    for t in ts:
        if not 0 <= t <= Fraction(1, 2):
            raise ValueError(f"t = {t} outside [0, 1/2]")
    n = len(ts)
    total = sum(ts)
    for mask in range(1 << n):
        size = mask.bit_count()
        if size % 2 == 0:
            continue
        inside = sum(t for k, t in enumerate(ts) if mask >> k & 1)
        if inside - (total - inside) > Fraction(size - 1, 2):
            return False
    return True
