"""How much entanglement does it take to separate a pure state from its
orthogonal complement with PPT measurements?

A two-qubit maximally entangled pair always suffices.  For most states a
partially entangled pair is enough, and for the maximally entangled state
of dimension d the needed entanglement shrinks roughly like log(d)/d.
"""

import numpy as np

from pptdiscrim.experiments import maximal_resource_necessity, resource_entropy
from pptdiscrim.povm import check_construction, thm15_povm, thm16_povm, thm19_iota, thm19_povm
from pptdiscrim.states import entanglement_entropy, schmidt_form


def main():
    psi = schmidt_form([0.6, 0.3, 0.1])
    full = thm15_povm(psi)
    partial = thm16_povm(psi)
    print("state with Schmidt spectrum (0.6, 0.3, 0.1)")
    print(f"  maximally entangled pair: passes={check_construction(full).passed}, cost 1 ebit")
    print(f"  partial pair: passes={check_construction(partial).passed}, weight {partial.iota:.4f}, "
          f"cost {entanglement_entropy(partial.resource):.4f} ebit")

    print("\nmaximally entangled state of dimension d")
    print("   d   weight    entropy   2 log2(d)/d   checks")
    for d in (2, 3, 4, 5, 8, 16, 32):
        c = thm19_povm(d) if d <= 16 else None
        ok = check_construction(c).passed if c is not None else "-"
        print(f"  {d:2d}   {thm19_iota(d):.4f}   {resource_entropy(d):.4f}    {2 * np.log2(d) / d:.4f}       {ok}")

    report = maximal_resource_necessity()
    print("\ntwo-qubit maximally entangled state, partial pairs of weight iota:")
    for iota, verdict in report.result["feasible"].items():
        print(f"  iota={iota:<5} -> {verdict}")


if __name__ == "__main__":
    main()
