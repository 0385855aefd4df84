"""Identifying, verifying and focussing a Pauli flow.

The running example: seven vertices, one input, two outputs, a YZ-plane
measurement and a Pauli-Y measurement; the flow identified is maximally
delayed (measurements are postponed as long as possible).
"""

from fractions import Fraction

from pauliflow import (
    MeasurementPattern, find_pauli_flow, focus_flow, focussed_set_generators,
    verify_flow, verify_focussed,
)

F = Fraction
pattern = MeasurementPattern.make(
    vertices=["i", "a", "b", "c", "d", "o1", "o2"],
    edges=[("i", "b"), ("a", "b"), ("a", "c"), ("a", "d"),
           ("b", "d"), ("c", "d"), ("c", "o1"), ("d", "o2")],
    inputs=["i"],
    outputs=["o1", "o2"],
    labels={"i": "XY", "a": "YZ", "b": "XY", "c": "XY", "d": "Y"},
    angles={"i": F(1, 4), "a": F(1, 3), "b": F(1, 5), "c": F(1, 7), "d": 0},
)
g = pattern.graph

flow = find_pauli_flow(g)
print("correction sets and depths:")
for v in sorted(flow.p):
    print(f"  p({v}) = {sorted(flow.p[v])}   depth {flow.order.depth[v]}")
print("violations:", verify_flow(g, flow))

focussed = focus_flow(g, flow)
print("\nafter focussing:")
for v in sorted(focussed.p):
    ok = verify_focussed(g, focussed.p[v], g.measured - {v})
    print(f"  p({v}) = {sorted(focussed.p[v])}   focussed over the rest: {ok}")

gens = focussed_set_generators(g)
print("\nfocussed-set generators (|O| - |I| of them):",
      [sorted(fs) for fs in gens])
