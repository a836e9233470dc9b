"""Regenerates frozen_values.hpp from PyWavelets and SciPy.

Run once; the header is committed and the C++ tests never call Python.
    python3 tests/oracles/gen_oracles.py > tests/oracles/frozen_values.hpp
"""
import numpy as np
import pywt
from scipy import stats, special


def arr(name, xs):
    body = ",\n    ".join(", ".join(repr(float(v)) for v in xs[i:i + 4]) for i in range(0, len(xs), 4))
    return f"inline const std::vector<double> {name} = {{\n    {body}}};\n"


def scalar(name, v):
    return f"inline constexpr double {name} = {float(v)!r};\n"


def ipa(x, fs):
    x = np.asarray(x, float)
    x = x - x.mean()
    spread = np.abs(x).max()
    if spread == 0:
        return 0.0
    a1, _ = pywt.dwt(x, "sym8", mode="symmetric")
    _, d2 = pywt.dwt(a1, "sym8", mode="symmetric")
    lam = np.median(np.abs(d2)) / 0.6745 * np.sqrt(2 * np.log(len(d2)))
    m = np.abs(d2)
    k = np.arange(1, len(m) - 1)
    hit = (m[k] > m[k - 1]) & (m[k] >= m[k + 1]) & (m[k] >= lam) & (m[k] > 1e-9 * spread)
    return hit.sum() / (len(x) / fs)


def bursts(t, f, period, amp, cycles=2, start=0.5):
    y = np.zeros_like(t)
    d = cycles / f
    tc = start
    while tc + d <= t[-1]:
        m = (t >= tc) & (t < tc + d)
        u = (t[m] - tc) / d
        y[m] += amp * np.sin(2 * np.pi * f * (t[m] - tc)) * 0.5 * (1 - np.cos(2 * np.pi * u))
        tc += period
    return y


out = ["#pragma once\n", "// Generated by gen_oracles.py (PyWavelets %s, SciPy %s). Do not edit.\n" % (pywt.__version__, __import__("scipy").__version__),
       "#include <vector>\n", "namespace oracle {\n"]

w = pywt.Wavelet("sym8")
out.append(arr("kSym8DecLo", w.dec_lo))
out.append(arr("kSym8DecHi", w.dec_hi))

i = np.arange(64)
x = np.sin(0.37 * i) + 0.5 * np.cos(1.3 * i) + 0.01 * i
a1, d1 = pywt.dwt(x, "sym8", mode="symmetric")
_, d2 = pywt.dwt(a1, "sym8", mode="symmetric")
out.append(arr("kDwtInput", x))
out.append(arr("kDwtDetail1", d1))
out.append(arr("kDwtApprox1", a1))
out.append(arr("kDwtDetail2", d2))
out.append(scalar("kDwtLambda2", np.median(np.abs(d2)) / 0.6745 * np.sqrt(2 * np.log(len(d2)))))

fs = 60.0
t = np.arange(600) / fs
rng = np.random.default_rng(1234)
noise = rng.normal(0, 0.002, t.size)
ipa_fast = 3.5 + bursts(t, 8.0, 1.0, 0.1) + noise
ipa_slow = 3.5 + bursts(t, 2.0, 2.0, 0.1) + noise
out.append(arr("kIpaFastInput", ipa_fast))
out.append(arr("kIpaSlowInput", ipa_slow))
out.append(scalar("kIpaFast", ipa(ipa_fast, fs)))
out.append(scalar("kIpaSlow", ipa(ipa_slow, fs)))
rng2 = np.random.default_rng(99)
ipa_noise = 3.0 + rng2.normal(0, 0.05, 600)
out.append(arr("kIpaNoiseInput", ipa_noise))
out.append(scalar("kIpaNoise", ipa(ipa_noise, fs)))

# Distributions.
out.append(scalar("kFCrit_3_116", stats.f.ppf(0.95, 3, 116)))
out.append(scalar("kTCrit_58", stats.t.ppf(0.975, 58)))
for name, (f, d1_, d2_) in {"kFsf_109_98": (109.98, 3, 116), "kFsf_1_47": (1.47, 3, 116),
                            "kFsf_2_5": (2.5, 1, 58), "kFsf_0_3": (0.3, 5, 7)}.items():
    out.append(scalar(name, stats.f.sf(f, d1_, d2_)))
for name, (tv, df) in {"kTp_2_0_58": (2.0, 58), "kTp_5_34_56_38": (5.34, 56.38), "kTp_0_5_3": (0.5, 3)}.items():
    out.append(scalar(name, 2 * stats.t.sf(abs(tv), df)))
for name, (a, b, xx) in {"kBeta_2_3_04": (2, 3, 0.4), "kBeta_05_05_09": (0.5, 0.5, 0.9),
                         "kBeta_58_05_099": (29, 0.5, 0.99), "kBeta_100_200_03": (100, 200, 0.3)}.items():
    out.append(scalar(name, special.betainc(a, b, xx)))

# Tests on fixed samples.
g1 = [2.1, 3.4, 1.9, 4.2, 3.3, 2.8]
g2 = [4.1, 5.0, 3.9, 4.4, 5.6]
g3 = [1.2, 0.8, 2.0, 1.5, 1.1, 0.9, 1.7]
fo = stats.f_oneway(g1, g2, g3)
out.append(arr("kG1", g1)); out.append(arr("kG2", g2)); out.append(arr("kG3", g3))
out.append(scalar("kOnewayF", fo.statistic)); out.append(scalar("kOnewayP", fo.pvalue))
lv = stats.levene([0, 0, 10, 10], [4, 5, 5, 6], center="mean")
out.append(scalar("kLeveneF", lv.statistic)); out.append(scalar("kLeveneP", lv.pvalue))
lv3 = stats.levene(g1, g2, g3, center="mean")
out.append(scalar("kLevene3F", lv3.statistic)); out.append(scalar("kLevene3P", lv3.pvalue))
wt = stats.ttest_ind(g1, g3, equal_var=False)
out.append(scalar("kWelchT", wt.statistic)); out.append(scalar("kWelchP", wt.pvalue))
out.append(scalar("kWelchDf", wt.df))
st = stats.ttest_ind(g1, g2, equal_var=True)
out.append(scalar("kPooledT", st.statistic)); out.append(scalar("kPooledP", st.pvalue))
px = [1.0, 2.0, 3.5, 4.0, 5.5, 6.1, 7.3]
py = [2.3, 1.9, 4.4, 3.8, 6.0, 5.1, 8.2]
pr = stats.pearsonr(px, py)
out.append(arr("kPx", px)); out.append(arr("kPy", py))
out.append(scalar("kPearsonR", pr.statistic)); out.append(scalar("kPearsonP", pr.pvalue))
for name, (r, n) in {"kCorrP_048_30": (0.48, 30), "kCorrP_023_120": (0.23, 120)}.items():
    tt = r * np.sqrt((n - 2) / (1 - r * r))
    out.append(scalar(name, 2 * stats.t.sf(abs(tt), n - 2)))

out.append("}  // namespace oracle\n")
print("".join(out), end="")
