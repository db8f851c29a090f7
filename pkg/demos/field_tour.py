"""A short tour of GF(2^10): elements as powers of z, traces, cubes, subfields."""

from apnwb.gf2n import get_field, polar_decompose, williams_classify

F = get_field(10)
print(F, "primitive element bits:", bin(F.gen))
z = F.primitive
a = z ** 100
print("a =", a, "inverse =", a.inverse(), "check:", a * a.inverse())
print("Tr(a) =", a.trace(), " Tr_5(a) in F_32:", (a + a ** F.q).in_subfield(F.m))

cubes = sum(F.is_cube(x) for x in F.nonzero_elements())
print(f"{cubes} of {F.order} nonzero elements are cubes")

v, k = polar_decompose(a)
print("polar form of a: v =", v, "(v^(q+1) =", v ** (F.q + 1), ") k =", k)

for e in (1, 3, 5):
    r = williams_classify(z ** e)
    print(f"x^3 + x + z^{e}: {r.kind.count} roots")
