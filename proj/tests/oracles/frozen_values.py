"""Independent high-precision evaluations used as frozen expectations in the C++ tests.

Run with: python3 tests/oracles/frozen_values.py
Uses mpmath (50 digits) and scipy; shares no code with the C++ implementation.
"""
import mpmath as mp
import numpy as np
from scipy.linalg import expm
from scipy.integrate import quad

mp.mp.dps = 50
hbar = mp.mpf("1.054571817e-34")
kB = mp.mpf("1.380649e-23")
e = mp.mpf("1.602176634e-19")
h = mp.mpf("6.62607015e-34")
tau = 2 * mp.pi


def omega(ghz):
    return tau * mp.mpf(ghz) * mp.mpf(10) ** 9


def n(w, T):
    return 1 / (mp.exp(hbar * w / (kB * T)) - 1)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 17)}")


w = omega("6.649")
show("bose_6649_200mK", n(w, mp.mpf("0.2")))
show("x_6649_200mK", hbar * w / (kB * mp.mpf("0.2")))

# two-bath aggregate
n1, n2 = n(w, mp.mpf("0.1")), n(w, mp.mpf("0.3"))
up = 1 * n1 + mp.mpf("0.5") * n2
down = 1 * (n1 + 1) + mp.mpf("0.5") * (n2 + 1)
nbar = up / (down - up)
show("agg_nbar", nbar)
show("agg_ratio", up / down)
show("agg_teff", hbar * w / kB / (-mp.log(up / down)))
show("agg_gamma1", 1 * (2 * n1 + 1) + mp.mpf("0.5") * (2 * n2 + 1))

show("gamma1_vs_T_019MHz_200mK", tau * mp.mpf("0.19e6") * mp.coth(hbar * w / (2 * kB * mp.mpf("0.2"))))
show("resonator_teff_n1_5GHz", hbar * omega("5") / kB / mp.log(2))

gap = mp.mpf("180e-6") * e
T = mp.mpf("0.25")
show("xqp_250mK", mp.sqrt(tau * kB * T / gap) * mp.exp(-gap / (kB * T)))
show("gap_over_kB", gap / kB)


def k0_quad(x):
    with mp.workdps(30):
        upper = mp.acosh(80 / x) + 1
        width = 1 / mp.sqrt(x)
        pts = sorted(set([0] + [min(upper, width * k / 4) for k in range(1, 17)] + [upper * k / 8 for k in range(1, 9)]))
        # e^{-x} ∫ exp(-2x sinh²(t/2)) dt
        return mp.exp(-x) * mp.quad(lambda t: mp.exp(-2 * x * mp.sinh(t / 2) ** 2), pts, maxdegree=10)


for x in ["1", "0.1", "0.001", "2", "2.5", "20", "50"]:
    kq = k0_quad(mp.mpf(x))
    show(f"K0({x})", kq)
    assert abs(kq / mp.besselk(0, mp.mpf(x)) - 1) < mp.mpf(10) ** -20

# plasma frequency from omega_ge and Ec
Ec = h * mp.mpf("232e6")
EJ = (hbar * w + Ec) ** 2 / (8 * Ec)
show("wp_over_2pi_GHz", mp.sqrt(8 * EJ * Ec) / hbar / tau / 1e9)

# gamma1_qp for R4-I at 250 mK, tau = 2pi/gamma
wp = mp.sqrt(8 * EJ * Ec) / hbar
y = hbar * w / (2 * kB * T)
xq = mp.sqrt(tau * kB * T / gap) * mp.exp(-gap / (kB * T))
g1qp = (1 / mp.pi) * wp**2 / w * (xq * mp.sqrt(2 * gap / (hbar * w)) + 4 * mp.exp(-gap / (kB * T)) * mp.cosh(y) * mp.besselk(0, y))
show("gamma1qp_R4I_250mK", g1qp)
show("tau1qp_R4I_250mK_us", tau / g1qp * 1e6)

# tunneling dephasing R4-I at 300 mK
T3 = mp.mpf("0.3")
show("gphi_tunnel_R4I_300mK", Ec / (mp.pi * hbar) * kB * T3 / gap * mp.exp(-gap / (kB * T3)))

# ratio closed forms
wgf = omega("6.649") + omega("6.417")
T = mp.mpf("0.15")
a, b = mp.exp(-hbar * w / (kB * T)), mp.exp(-hbar * wgf / (kB * T))
show("A_R4I_150mK", (1 - a) / (1 - b))
show("B_R4I_150mK", (a - b) / (1 - a))
show("C_R4I_150mK", (a - b) / (1 - b))
show("lowT_B_80mK", mp.exp(-hbar * w / (kB * mp.mpf("0.08"))))
show("teff_ratio_0024", hbar * w / kB / (-mp.log(mp.mpf("0.024"))))

# Boltzmann populations at 300 mK for 6.65 GHz, alpha/h=-230 MHz
wge2 = omega("6.65")
wef2 = omega("6.42")
T = mp.mpf("0.3")
Z = 1 + mp.exp(-hbar * wge2 / (kB * T)) + mp.exp(-hbar * (wge2 + wef2) / (kB * T))
show("pe_over_pg_300", mp.exp(-hbar * wge2 / (kB * T)))
show("pf_over_pg_300", mp.exp(-hbar * (wge2 + wef2) / (kB * T)))

# temperature error coefficient, family B
x = mp.mpf("5.198")
show("dT_B_x5198_rel009", (mp.exp(x) - 1) / (x * mp.exp(x)) * mp.mpf("0.09"))

# QFI numbers, 7.04 GHz, 65 mK
x = hbar * omega("7.04") / (kB * mp.mpf("0.065"))
show("x_704_65", x)
q2 = (1 + mp.exp(x)) ** 2 / (x**2 * mp.exp(x))
show("qfi2_sm", q2)
show("qfi2_N17", q2 / 2**17)
show("qfi2_rel", mp.sqrt(q2 / 2**17))
show("net_mK", mp.sqrt(q2 / 2**17) * mp.mpf("0.065") * mp.sqrt(29) * 1000)
xge = hbar * omega("7.042") / (kB * mp.mpf("0.065"))
xgf = hbar * (omega("7.042") + omega("6.835")) / (kB * mp.mpf("0.065"))
q3 = (mp.exp(xge + xgf) + mp.exp(xge) + mp.exp(xgf)) ** 2 / ((xge**2 * mp.exp(xgf) + xgf**2 * mp.exp(xge) + (xge + xgf) ** 2) * mp.exp(xge + xgf))
q2b = (1 + mp.exp(xge)) ** 2 / (xge**2 * mp.exp(xge))
show("qfi3_Q2III_65", q3)
show("qfi2_Q2III_65", q2b)

# abc variances at p=(0.7,0.2,0.1), phi=(0,1,2); column 1 uses dphi_f = phi_g - phi_e
pg, pe, pf = mp.mpf("0.7"), mp.mpf("0.2"), mp.mpf("0.1")
pg_, pe_, pf_ = 0, 1, 2
dg, de, df = pe_ - pf_, pf_ - pg_, pg_ - pe_


def col(di, dj, dk):
    va = 2 * pe * pf * di**2 + (pe + pf) * pg * (dj**2 + dk**2)
    vb = 2 * pe * pg * di**2 + (pe + pg) * pf * (dj**2 + dk**2)
    vc = 2 * pg * pf * di**2 + (pg + pf) * pe * (dj**2 + dk**2)
    return va, vb, vc


for name, args in [("col1", (df, dg, de)), ("col2", (de, df, dg)), ("col3", (dg, de, df))]:
    va, vb, vc = col(*args)
    print(name, mp.nstr(va, 17), mp.nstr(vb, 17), mp.nstr(vc, 17))

# asymmetric readout levels phi=(0,1,3)
pg_, pe_, pf_ = 0, 1, 3
dg, de, df = pe_ - pf_, pf_ - pg_, pg_ - pe_
for name, args in [("col1_013", (df, dg, de)), ("col2_013", (de, df, dg)), ("col3_013", (dg, de, df))]:
    va, vb, vc = col(*args)
    print(name, mp.nstr(va, 17), mp.nstr(vb, 17), mp.nstr(vc, 17))

# lossy protocol sextuple at 100 mK (R4-I, tau1 = 5.5 us, qp, ef factor 2,
# transfer rate = 1/tau with tau = 2pi/gamma), dt_pi = 165 ns, dt_ro = 2 us, phi = (0,1,2)
from scipy.special import k0 as sk0
hb, kb, ee, hh = 1.054571817e-34, 1.380649e-23, 1.602176634e-19, 6.62607015e-34
wge_, wef_ = 2 * np.pi * 6.649e9, 2 * np.pi * 6.417e9
Ec_, gap_ = hh * 232e6, 180e-6 * ee
EJ_ = (hb * wge_ + Ec_) ** 2 / (8 * Ec_)
wp_ = np.sqrt(8 * EJ_ * Ec_) / hb


def nn(wv, Tv):
    return 1 / np.expm1(hb * wv / (kb * Tv))


def g1qp_(Tv):
    yy = hb * wge_ / (2 * kb * Tv)
    xq_ = np.sqrt(2 * np.pi * kb * Tv / gap_) * np.exp(-gap_ / (kb * Tv))
    return (1 / np.pi) * wp_**2 / wge_ * (xq_ * np.sqrt(2 * gap_ / (hb * wge_)) + 4 * np.exp(-gap_ / (kb * Tv)) * np.cosh(yy) * sk0(yy))


def rates(Tv):
    tot = (2 * np.pi / 5.5e-6 + g1qp_(Tv)) / (2 * np.pi)
    ng, ne = nn(wge_, Tv), nn(wef_, Tv)
    return (tot * ng / (2 * ng + 1), tot * (ng + 1) / (2 * ng + 1),
            2 * tot * ne / (2 * ne + 1), 2 * tot * (ne + 1) / (2 * ne + 1))


def gen(r):
    gu, gd, eu, ed = r
    return np.array([[-gu, gd, 0], [gu, -(gd + eu), ed], [0, eu, -ed]])


def Mge(d):
    return np.array([[1 - d, d, 0], [d, 1 - d, 0], [0, 0, 1]])


def Mef(d):
    return np.array([[1, 0, 0], [0, 1 - d, d], [0, d, 1 - d]])


seqs = [[], ["ge"], ["ge", "ef"], ["ef"], ["ef", "ge"], ["ef", "ge", "ef"]]
Tv = 0.1
r = rates(Tv)
print("lossy_rates_100mK", *[f"{v:.17g}" for v in r])
L = gen(r)
E = expm(L * 165e-9)
Ev = np.array([0, hb * wge_, hb * (wge_ + wef_)])
p0 = np.exp(-Ev / (kb * Tv))
p0 /= p0.sum()
phi = np.array([0.0, 1.0, 2.0])
out = []
for s in seqs:
    p = p0.copy()
    for i, k in enumerate(s):
        if i > 0:
            p = E @ p
        p = (Mge(1.0) if k == "ge" else Mef(1.0)) @ p
    val = quad(lambda t: phi @ (expm(L * t) @ p), 0, 2e-6, epsabs=0, epsrel=1e-13, limit=200)[0] / 2e-6
    out.append(val)
print("lossy_sextuple_100mK", *[f"{v:.17g}" for v in out])
