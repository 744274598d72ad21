"""Watching the learner identify a hidden query from membership queries.

Run with:  python demos/learning_session.py
"""

from eliq import (
    SimulatedOracle,
    combined_signature,
    default_budget,
    equivalent,
    learn,
    parse_cq,
    parse_ontology,
    seed_query,
    serialize_cq,
)

o = parse_ontology("A sub some r\nsome r sub A\nr rsub s\n")
target = parse_cq("q(x0) :- A(x0), r(x0,y), B(y)")

print("Ontology:")
print("  A sub some r | some r sub A | r rsub s")
print("Hidden target (known only to the oracle):", serialize_cq(target))
print()

oracle = SimulatedOracle(o, target)
seed = seed_query(o, combined_signature(o, target))
print("Auto seed (contained in every possible target):", serialize_cq(seed))

budget = default_budget(len(target.variables()), o)
trace = learn(o, oracle, seed, budget)

print(f"\nOutcome: {trace.outcome} after {trace.membership_queries} membership queries")
print(f"Frontier sizes per iteration: {trace.frontier_sizes}")
print("\nHypothesis ladder (each step is a least general generalization the")
print("oracle still accepts, re-minimized):")
for i, h in enumerate(trace.hypotheses):
    print(f"  q_{i}: {serialize_cq(h)}")

assert equivalent(o, trace.final, target)
print("\nFinal hypothesis is equivalent to the target (checked).")

print("\n--- Characterizing the learned query by data examples ---\n")
from eliq import characterize, fits, verify_unique, serialize_abox

examples = characterize(o, trace.final)
pos = examples.positives[0]
print("Positive example:", serialize_abox(pos.abox).strip().replace("\n", ", "),
      "anchored at", pos.individual)
print(f"Negative examples: {len(examples.negatives)} (one per frontier member)")
verdict = verify_unique(o, trace.final, examples, len(trace.final.variables()) + 1)
print("Exhaustively verified unique up to equivalence:", verdict.ok,
      f"({verdict.candidates_checked} fitting candidates examined)")
