"""Independent reference values for the frozen regression fixtures.

Works from the electric-enthalpy Hessian of the section, integrated with
Gauss quadrature, which is a different route from both the Rust stress
assembly and the Rust mixed (stress-unknown) oracle. Run from this
directory: `python3 oracle.py`.
"""
import json
import numpy as np

DATA = "../../data/"
db = {m["name"]: m for m in json.load(open(DATA + "materials.json"))["materials"]}


def to_e_form(m):
    s = np.array(m["s_E_m2_per_N"]); d = np.array(m["d_m_per_V"]); et = np.array(m["eps_T_F_per_m"])
    c = np.linalg.inv(s)
    e = d @ c
    return c, e, et - d @ c @ d.T


def plane(m):
    c, e, eps = to_e_form(m)
    # in-plane compliance route: invert the 2x2 in-plane block of s after T33 = 0
    s = np.array(m["s_E_m2_per_N"]); d = np.array(m["d_m_per_V"]); et = np.array(m["eps_T_F_per_m"])
    q = np.linalg.inv(s[:2, :2])
    e3 = q @ d[2, :2]
    eps33 = et[2, 2] - d[2, :2] @ q @ d[2, :2]
    return dict(q=q, e31=e3[0], e32=e3[1], eps33=eps33, rho=m["density_kg_m3"])


def layup(name):
    j = json.load(open(DATA + name))
    layers = []
    for l in j["layers"]:
        p = {"+z": 1, "-z": -1, "none": 0}[l["poling"]]
        layers.append((plane(db[l["material"]]), l["thickness_mm"] * 1e-3, p, l["electroded"]))
    return j["width_mm"] * 1e-3, j["wiring"], layers


def hessian(width, wiring, layers, closure):
    nterm = sum(1 for l in layers if l[3]) if wiring == "independent" else (1 if any(l[3] for l in layers) else 0)
    n = 2 + nterm
    H = sum(l[1] for l in layers)
    z = -H / 2
    gp, gw = np.polynomial.legendre.leggauss(4)
    kxx = np.zeros((n, n)); kxw = np.zeros((n, 2)); kww = np.zeros((2, 2))
    t = 0
    for (m, h, p, el) in layers:
        z0, z1 = z, z + h
        ev = np.zeros(n)
        if el:
            ev[2 + (t if wiring == "independent" else 0)] = -p / h
            t += 1
        q = m["q"]; e31 = m["e31"]; e32 = m["e32"]; eps = m["eps33"]
        for g, w in zip(gp, gw):
            zz = 0.5 * (z0 + z1) + 0.5 * h * g; ww = 0.5 * h * w
            s11 = np.zeros(n); s11[0] = 1; s11[1] = zz
            if closure == "NS":
                qr = q[0, 0] - q[0, 1] ** 2 / q[1, 1]
                er = e31 - e32 * q[0, 1] / q[1, 1]
                epr = eps + e32 ** 2 / q[1, 1]
            else:
                qr, er, epr = q[0, 0], e31, eps
            kxx += ww * (qr * np.outer(s11, s11) - er * (np.outer(s11, ev) + np.outer(ev, s11)) - epr * np.outer(ev, ev))
            if closure == "NSR":
                phi = np.array([1.0, zz])
                kxw += ww * np.outer(q[0, 1] * s11 - e32 * ev, phi)
                kww += ww * q[1, 1] * np.outer(phi, phi)
        z = z1
    field = None
    if closure == "NSR":
        field = -np.linalg.solve(kww, kxw.T)  # 2 x n: (a,b) per unit state
        kxx = kxx - kxw @ np.linalg.solve(kww, kxw.T)
    return width * kxx, field


def caps(K):
    kmm = K[:2, :2]; g = K[:2, 2]; cb = -K[2, 2]
    return cb, cb + g @ np.linalg.solve(kmm, g)


def deff(K, open_circuit):
    kmm = K[:2, :2].copy()
    if open_circuit and K.shape[0] > 2:
        kme = K[:2, 2:]; cq = -K[2:, 2:]
        kmm = kmm + kme @ np.linalg.solve(cq, kme.T)
    return kmm[1, 1] - kmm[0, 1] ** 2 / kmm[0, 0]


np.set_printoptions(precision=17)
pz = db["PZT-5H"]
c, e, eps = to_e_form(pz)
print("PZT-5H e-form: c11 %r c12 %r c13 %r c33 %r" % (c[0, 0], c[0, 1], c[0, 2], c[2, 2]))
print("  e31 %r e33 %r e15 %r epsS33 %r (rel %r)" % (e[2, 0], e[2, 2], e[0, 4], eps[2, 2], eps[2, 2] / 8.8541878128e-12))
pm = plane(pz)
print("PZT-5H plane: Q11 %r Q12 %r e31 %r eps33 %r" % (pm["q"][0, 0], pm["q"][0, 1], pm["e31"], pm["eps33"]))
am = plane(db["Al-6061"])
print("Al plane: Q11 %r Q12 %r" % (am["q"][0, 0], am["q"][0, 1]))

sw = layup("sandwich.json")
mass = sw[0] * sum(l[0]["rho"] * l[1] for l in sw[2])
print("sandwich mass per length %r" % mass)
for cl in ["ND", "NS", "NSR"]:
    K, f = hessian(*sw, cl)
    cb, cf = caps(K)
    L = 0.1
    lam = 1.87510407
    fs = lam ** 2 / (2 * np.pi) * np.sqrt(deff(K, False) / (mass * L ** 4))
    fo = lam ** 2 / (2 * np.pi) * np.sqrt(deff(K, True) / (mass * L ** 4))
    print("sandwich %s: blocked %r free %r  [nF/mm %.4f %.4f]" % (cl, cb, cf, cb * 1e6, cf * 1e6))
    print("   A %r D %r B %r gm %r gk %r" % (K[0, 0], K[1, 1], K[0, 1], K[0, 2], K[1, 2]))
    print("   f1 short %r open %r k2 %r" % (fs, fo, (fo ** 2 - fs ** 2) / fs ** 2))
    print("   sensor charge kappa=0.01: %r" % (K[2, :2] @ np.array([0.0, 0.01])))
    if f is not None:
        print("   NSR field per unit eps (a,b) %r ; per unit V %r" % (f[:, 0], f[:, 2]))

um = layup("unimorph.json")
for cl in ["ND", "NS", "NSR"]:
    K, f = hessian(*um, cl)
    cb, cf = caps(K)
    x = -np.linalg.solve(K[:2, :2], K[:2, 2] * 100.0)
    print("unimorph %s: blocked %r free %r ; 100 V free state eps %r kappa %r" % (cl, cb, cf, x[0], x[1]))
    if f is not None:
        print("   NSR field per unit V (a,b) %r" % (f[:, 2],))

bm = layup("bimorph.json")
K, _ = hessian(*bm, "NS")
V = 100.0; L = 0.05
x = -np.linalg.solve(K[:2, :2], K[:2, 2] * (V / 2))
tip = x[1] * L ** 2 / 2
h = sum(l[1] for l in bm[2])
classic = 3 * (-3.2e-10) * V * L ** 2 / (2 * h ** 2)
print("bimorph NS series tip %r classical %r ratio %r" % (tip, classic, tip / classic))
