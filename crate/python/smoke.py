"""Quick end-to-end check of the Python bindings."""

import invdepth_py as inv

gb = inv.groebner_basis("ring Q[x,y]\nx^2 - y\nx*y - 1\n", order="lex")
print(gb)

header, found = inv.membership("ring F3[x,y]\nx^2\ny\n", "ring F3[x,y]\nx^4 + y\nx\n")
assert found[0] is not None and found[1] is None, found

res = inv.frobenius_invariants(2, 2, "ga")
assert len(res) == 6, res
print(res)

ring = "ring F2[x,y,z]\nx*y\n"
scan = inv.scan_reg(ring, "ring F2[x,y,z]\nx\nx + y\nz\n")
assert scan.accepted == [1, 2], scan

_, img = inv.roberts_forward(2, 2, "X1*Y2 + Y1*X2")
_, back = inv.roberts_inverse(2, 2, img)
print("roberts", img, "->", back)

cert = inv.cmdef(2, 3, "ga")
assert cert.complete and cert.cmdef == 1, cert
assert inv.verify(cert.text) == (True, (1, 1))
print(cert)

tampered = cert.text.replace("cmdef = 1", "cmdef = 0")
try:
    inv.verify(tampered)
except RuntimeError as e:
    print("tampered certificate rejected:", e)
else:
    raise AssertionError("tampered certificate accepted")

partial = inv.cmdef(2, 4, "ga", time_budget=0.2)
assert not partial.complete
print(partial, partial.depth_bounds)
print("ok")
