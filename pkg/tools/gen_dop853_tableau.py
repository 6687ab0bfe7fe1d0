"""Regenerate ``squeezeflow/_dop853.py`` from the DOP853 tableau shipped with scipy.

The coefficients are Hairer & Wanner's DOP853 (Dormand-Prince 8(5,3)); scipy
tabulates them to 30 digits. Usage::

    python tools/gen_dop853_tableau.py > src/squeezeflow/_dop853.py
"""
from scipy.integrate._ivp import dop853_coefficients as dc

n = dc.N_STAGES
print('"""Dormand-Prince 8(5,3) tableau (Hairer & Wanner), generated by')
print('tools/gen_dop853_tableau.py. Do not edit by hand."""')
print()
print("C = (")
for c in dc.C[:n]:
    print(f"    {float(c)!r},")
print(")")
print()
print("# Lower-triangular rows as sparse (index, coefficient) pairs.")
print("A = (")
for i in range(n):
    row = [(j, float(dc.A[i, j])) for j in range(i) if dc.A[i, j] != 0.0]
    print(f"    {tuple(row)!r},")
print(")")
print()
print("B = (")
for j in range(n):
    if dc.B[j] != 0.0:
        print(f"    ({j}, {float(dc.B[j])!r}),")
print(")")
print()
for name, arr in (("E3", dc.E3), ("E5", dc.E5)):
    print(f"{name} = (")
    for j in range(n + 1):
        if arr[j] != 0.0:
            print(f"    ({j}, {float(arr[j])!r}),")
    print(")")
    print()
