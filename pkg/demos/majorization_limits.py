"""The flagged-superposition test proves LOCC indistinguishability for the
three Bell states, but it can never fire on the ququad set: the needed
state conversion always succeeds, with or without an extra Bell pair."""

from pptdiscrim.hssh import EnsembleSpec, catalysis_transform_check, hssh_detect, random_detector_ensemble
from pptdiscrim.multicopy import unambiguous_multicopy_value
from pptdiscrim.states import bell_state, ququad_set, resource_state


def main():
    detectors = EnsembleSpec((1 / 3,) * 3, tuple(bell_state(k) for k in (1, 2, 3)))
    for weight in (0.6, 2 / 3, 0.7, 0.9):
        states = [bell_state(k).tensor(resource_state(weight)) for k in (1, 2, 3)]
        print(f"three Bell states with resource weight {weight:.3f}: detected={hssh_detect(states, detectors)}")

    chis = ququad_set()
    seeds = range(50)
    detected = sum(hssh_detect(chis, random_detector_ensemble(s)) for s in seeds)
    reachable = sum(catalysis_transform_check(random_detector_ensemble(s)) for s in seeds)
    print(f"\nququad set: detected on {detected} of {len(seeds)} random detector ensembles")
    print(f"conversion possible on {reachable} of {len(seeds)}")

    print("\nmany copies do not help against the complement of a maximally entangled state:")
    for d in (2, 3):
        values = [unambiguous_multicopy_value(d, m) for m in range(1, 7)]
        print(f"  d={d}: best unambiguous success over m=1..6 copies: {values}")


if __name__ == "__main__":
    main()
