"""Count the fiber orderings that satisfy the lattice identities of the conic bundle B = l."""
from tetratrig import picard as pc


def main():
    found = pc.search_bundle_assignments()
    print(f"orderings satisfying Gram match, 2B identity and all identities: {len(found)}")
    a = found[0]
    print("first ordering, first bundle :", ", ".join(map(str, a.first)))
    print("first ordering, second bundle:", ", ".join(map(str, a.second)))
    reference = pc.reference_marking()
    clash = sum(1 for b in found if pc.identity_failures(b, reference))
    print(f"orderings failing under the fixed transcribed marking: {clash}")


if __name__ == "__main__":
    main()
