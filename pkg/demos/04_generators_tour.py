"""One instance from every generator family, with its vital statistics."""

from collections import Counter

from bincsp import (CrosswordSpec, ModelBParams, gen_clique_embedded,
                    gen_config_like, gen_crossword, gen_model_b,
                    gen_parity_chain, gen_rlfa, solve, tshirt_problem)
from bincsp.gen import is_connected


def describe(p, note=""):
    arities = Counter(c.arity for c in p.constraints)
    kinds = Counter("ext" if c.relation is not None else c.predicate.kind
                    for c in p.constraints)
    print(f"{p.name or 'instance'}: {p.n} vars, {len(p.constraints)} "
          f"constraints, arities {dict(sorted(arities.items()))}, "
          f"bodies {dict(kinds)}, connected={is_connected(p)}")
    if note:
        print(f"  {note}")


def main():
    describe(gen_model_b(ModelBParams(30, 6, 3, 1.847, 50, seed=0)),
             "a hard-region random class: 75 scopes, 108 tuples each")

    base = ModelBParams(20, 6, 3, 3, 45, seed=1)
    describe(gen_clique_embedded(base, 12),
             "hub-shared clique scopes: any two overlap in 1 or 2 variables")

    cw = gen_crossword(CrosswordSpec.blank(5, 5))
    describe(cw, f"verdict with word-level search: "
                 f"{solve(cw, 'MAC-PW-AC').verdict}")

    describe(gen_parity_chain(3), "insoluble for every n")

    describe(gen_rlfa("prob5", seed=2, adjacent8=True),
             "tight separations inside groups; 8-ary adjacent-channel "
             "constraints stay intensional (expansion would exhaust memory)")

    describe(gen_config_like(tshirt_problem(), seed=3),
             "the t-shirt base extended by 6 variables and 8-10 random "
             "constraints until connected")


if __name__ == "__main__":
    main()
