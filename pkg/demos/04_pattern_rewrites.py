"""Pattern rewrites and their PDDAG-side simulations.

Each rewrite returns a report carrying the rewritten pattern, the updated
flow and focussed sets, and two Pddags: one extracted from the rewritten
pattern, one obtained by replaying the rewrite as moves on the original
Pddag.  `consistent` says they agree node for node and row for row.
"""

from fractions import Fraction

from pauliflow import (
    MeasurementPattern, eliminate_z, find_pauli_flow, focus_flow,
    focussed_set_generators, local_complement_pattern, pivot_pattern,
    relabel_pauli, switch_flow_rewrite,
)

F = Fraction


def example(alpha_a=F(1, 3), alpha_c=F(1, 7)):
    return MeasurementPattern.make(
        vertices=["i", "a", "b", "c", "d", "o1", "o2"],
        edges=[("i", "b"), ("a", "b"), ("a", "c"), ("a", "d"),
               ("b", "d"), ("c", "d"), ("c", "o1"), ("d", "o2")],
        inputs=["i"],
        outputs=["o1", "o2"],
        labels={"i": "XY", "a": "YZ", "b": "XY", "c": "XY", "d": "Y"},
        angles={"i": F(1, 4), "a": alpha_a, "b": F(1, 5), "c": alpha_c, "d": 0},
    )


def prepared(pattern):
    flow = focus_flow(pattern.graph, find_pauli_flow(pattern.graph))
    return flow, focussed_set_generators(pattern.graph)


def show(name, report):
    dag = report.pddag_via_simulation
    outs = dag.tableau.outputs
    nodes = {n: f"({dag.nodes[n].string.format(outs)}, {dag.nodes[n].angle}*pi)"
             for n in dag.node_ids}
    print(f"{name}: both routes agree: {report.consistent}")
    print(f"  nodes: {nodes}")


p = example(alpha_c=F(1, 2))
flow, fsets = prepared(p)
show("relabel c (pi/2 XY measurement becomes Pauli Y)",
     relabel_pauli(p, flow, fsets, "c"))

p = example(alpha_a=F(1))
flow, fsets = prepared(p)
show("eliminate a (YZ measurement at angle pi)",
     eliminate_z(p, flow, fsets, "a"))

p = example()
flow, fsets = prepared(p)
show("local complementation about d", local_complement_pattern(p, flow, fsets, "d"))
show("pivot about the edge a~b", pivot_pattern(p, flow, fsets, "a", "b"))
show("switch the flow of b by the focussed set {c, o2}",
     switch_flow_rewrite(p, flow, fsets, "b", frozenset({"c", "o2"})))
