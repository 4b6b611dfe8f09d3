# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled stepping kernel.

Works on split real/imaginary stack arrays with scalar arithmetic only, in
the same evaluation order as the NumPy kernel, so both backends produce
the same trajectories.  State arrays carry zero guard cells at both ends
so the neighbour sum needs no boundary branches.  The Python-visible
wrappers live in backends.py.
"""

from libc.math cimport isfinite

DEF MAX_WELLS = 61  # stack buffers hold n + 2 entries


cdef inline void _drift(int n, int mid1, double twochi, double jrate, double g,
                        bint corr,
                        const double* are, const double* aim,
                        double* ore, double* oim) noexcept nogil:
    # o = i * (J * (a_left + a_right) - 2 chi c a [+ g a at the middle]);
    # indices 1..n, guards at 0 and n+1 are zero.
    cdef int p
    cdef double c, t1, nre, nim, vre, vim
    for p in range(1, n + 1):
        c = are[p] * are[p]
        c = c + aim[p] * aim[p]
        if corr:
            c = c - 1.0
        nre = are[p - 1] + are[p + 1]
        nim = aim[p - 1] + aim[p + 1]
        vre = jrate * nre
        vim = jrate * nim
        t1 = twochi * c
        vre = vre - t1 * are[p]
        vim = vim - t1 * aim[p]
        if p == mid1:
            vre = vre + g * are[p]
            vim = vim + g * aim[p]
        ore[p] = -vim
        oim[p] = vre


def run_one(double[::1] a0re, double[::1] a0im, double[::1] noise,
            int n, int mid, double dt, int n_steps, int stride, int n_samples,
            double twochi, double jrate, double noise_coef, bint corr,
            double[:, ::1] out_sre, double[:, ::1] out_sim,
            double[::1] fin_re, double[::1] fin_im):
    """Integrate one trajectory; sampled states go to out_sre/out_sim.

    ``mid`` is the 0-based middle well.  Returns -1 on success, or the
    index of the first sample with a non-finite amplitude.
    """
    if n + 2 > MAX_WELLS:
        raise ValueError(f"kernel supports at most {MAX_WELLS - 2} wells")

    cdef double are[MAX_WELLS]
    cdef double aim[MAX_WELLS]
    cdef double kre[MAX_WELLS]
    cdef double kim[MAX_WELLS]
    cdef double accre[MAX_WELLS]
    cdef double accim[MAX_WELLS]
    cdef double tre[MAX_WELLS]
    cdef double tim[MAX_WELLS]

    cdef double half_dt = 0.5 * dt
    cdef double dt6 = dt / 6.0
    cdef int mid1 = mid + 1
    cdef int j, step, s_idx
    cdef double g
    cdef int bad = -1

    with nogil:
        for j in range(n + 2):
            are[j] = 0.0
            aim[j] = 0.0
            tre[j] = 0.0
            tim[j] = 0.0
        for j in range(n):
            are[j + 1] = a0re[j]
            aim[j + 1] = a0im[j]
            out_sre[0, j] = a0re[j]
            out_sim[0, j] = a0im[j]
        s_idx = 1
        for step in range(1, n_steps + 1):
            g = noise_coef * noise[step - 1]

            _drift(n, mid1, twochi, jrate, g, corr, are, aim, kre, kim)
            for j in range(1, n + 1):
                accre[j] = kre[j]
                accim[j] = kim[j]
                tre[j] = half_dt * kre[j] + are[j]
                tim[j] = half_dt * kim[j] + aim[j]
            _drift(n, mid1, twochi, jrate, g, corr, tre, tim, kre, kim)
            for j in range(1, n + 1):
                accre[j] = accre[j] + 2.0 * kre[j]
                accim[j] = accim[j] + 2.0 * kim[j]
                tre[j] = half_dt * kre[j] + are[j]
                tim[j] = half_dt * kim[j] + aim[j]
            _drift(n, mid1, twochi, jrate, g, corr, tre, tim, kre, kim)
            for j in range(1, n + 1):
                accre[j] = accre[j] + 2.0 * kre[j]
                accim[j] = accim[j] + 2.0 * kim[j]
                tre[j] = dt * kre[j] + are[j]
                tim[j] = dt * kim[j] + aim[j]
            _drift(n, mid1, twochi, jrate, g, corr, tre, tim, kre, kim)
            for j in range(1, n + 1):
                accre[j] = accre[j] + kre[j]
                are[j] = are[j] + dt6 * accre[j]
                accim[j] = accim[j] + kim[j]
                aim[j] = aim[j] + dt6 * accim[j]

            if step % stride == 0 and s_idx < n_samples:
                for j in range(n):
                    out_sre[s_idx, j] = are[j + 1]
                    out_sim[s_idx, j] = aim[j + 1]
                    if bad < 0 and not (isfinite(are[j + 1]) and isfinite(aim[j + 1])):
                        bad = s_idx
                s_idx = s_idx + 1
                if bad >= 0:
                    break

        for j in range(n):
            fin_re[j] = are[j + 1]
            fin_im[j] = aim[j + 1]
    return bad


def accumulate_states(double[:, ::1] sre, double[:, ::1] sim,
                      double[:, :, ::1] f_re, double[:, :, ::1] f_im,
                      double[:, :, ::1] density, double[:, :, ::1] re_sq):
    """Add one trajectory's sampled states into the chunk moment sums."""
    cdef int S = sre.shape[0]
    cdef int n = sre.shape[1]
    cdef int s, i, j
    cdef double cre, cim, dp
    cdef double pbuf[MAX_WELLS]
    if n > MAX_WELLS:
        raise ValueError(f"kernel supports at most {MAX_WELLS} wells")
    with nogil:
        for s in range(S):
            for i in range(n):
                pbuf[i] = sre[s, i] * sre[s, i] + sim[s, i] * sim[s, i]
            for i in range(n):
                for j in range(i, n):
                    # conj(a_i) * a_j
                    cre = sre[s, i] * sre[s, j] + sim[s, i] * sim[s, j]
                    cim = sre[s, i] * sim[s, j] - sim[s, i] * sre[s, j]
                    f_re[s, i, j] += cre
                    f_im[s, i, j] += cim
                    re_sq[s, i, j] += cre * cre
                    dp = pbuf[i] * pbuf[j]
                    density[s, i, j] += dp
                    if j > i:
                        f_re[s, j, i] += cre
                        f_im[s, j, i] -= cim
                        re_sq[s, j, i] += cre * cre
                        density[s, j, i] += dp
