"""Multiprecision reference computations (mpmath), independent of the package kernels."""
import mpmath as mp


def classical_step(c):
    """One Graeffe step on a list of mpc coefficients, term by term."""
    d = len(c) - 1
    h = []
    for i in range(d + 1):
        s = c[i] * c[i] * (-1) ** (d + i)
        acc = mp.mpc(0)
        for j in range(1, min(i, d - i) + 1):
            acc += (-1) ** (d + i - j) * c[i - j] * c[i + j]
        h.append(s + 2 * acc)
    return h


def classical_orbit(coeffs, steps, prec=256):
    """``[f, Gf, ..., G^steps f]`` as lists of mpc at ``prec`` bits."""
    with mp.workprec(prec):
        c = [mp.mpc(complex(z)) for z in coeffs]
        out = [c]
        for _ in range(steps):
            c = classical_step(c)
            out.append(c)
        return out


def precision_iterations(coeffs, bits, prec=320, k_max=48):
    """Smallest ``k`` at which every Graeffe coefficient has relative precision ``2**-b``.

    At convergence ``h^{k+1}_i = +-(h^k_i)^2``; the defect
    ``max_i | ln|h^{k+1}_i| - 2 ln|h^k_i| |`` is about twice the relative
    error of ``h^k`` and is what gets compared with ``2**-b``.  Returns a
    dict ``b -> k``; bits not reached within ``k_max`` are absent.
    """
    out = {}
    with mp.workprec(prec):
        c = [mp.mpc(complex(z)) for z in coeffs]
        lg = [mp.log(abs(z)) for z in c]
        for k in range(k_max):
            c = classical_step(c)
            lg2 = [mp.log(abs(z)) for z in c]
            defect = max(abs(a - 2 * b) for a, b in zip(lg2, lg))
            for b in bits:
                if b not in out and defect < mp.mpf(2) ** -b:
                    out[b] = k
            lg = lg2
            if len(out) == len(bits):
                break
    return out
