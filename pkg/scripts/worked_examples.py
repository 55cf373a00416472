#!/usr/bin/env python3
"""Print the verdicts and sets for the worked examples."""

from hflz import corpus, hfl
from hflz.automata import trivial_lts
from hflz.checker import denotational_check, eval_hflz
from hflz.intertype import infer_intersection_transform, temporal_pipeline
from hflz.surface import show_program
from hflz.translate import translate_csa, translate_may, translate_must


def fmt(states):
    return "{" + ", ".join(sorted(states)) + "}"


def main():
    L0 = trivial_lts()
    print("denotational sets")
    print("  nu X.<close>true /\\ <read>X on L_file :", fmt(denotational_check(corpus.lts_file(), corpus.phi_file())))
    print("  phi_ab (<c>true) on L_1              :", fmt(denotational_check(corpus.lts_1(), corpus.phi_ab_c())))
    print("  phi_even (<c>true) 0 on L_1          :", fmt(denotational_check(corpus.lts_1(), corpus.phi_even_c0())))

    h = translate_may(corpus.p_loop(), "a")
    print("\nP_loop may a:", eval_hflz(L0, h), "  dual:", eval_hflz(L0, hfl.dual_hes(h)))
    for n in (0, 1, 3):
        print(f"P_sum {n} may fail:", eval_hflz(L0, translate_may(corpus.p_sum(n), "fail")))
    for m, n in ((1, 1), (2, 2), (3, 1)):
        print(f"loop {m} {n} must end:", eval_hflz(L0, translate_must(corpus.p_loopxy(m, n), "end")))
    for n in (0, 1, 5, -1, -3):
        print(f"HES' n={n}:", eval_hflz(corpus.lts_file_end(), corpus.hes_file_end(n)))

    h = translate_csa(corpus.p_app(), corpus.OMEGA_APP)
    print("\nCSA of P_app:\n" + hfl.show_hes(h) + "verdict:", eval_hflz(L0, h))

    A = corpus.automaton_ab()
    xi, p2, omega = infer_intersection_transform(corpus.p_tr(), A)
    print("\nintersection-type transform of P_tr:")
    for f, theta, m in sorted(xi, key=str):
        print(f"  {f} : {theta}, {m}")
    print(show_program(p2) + "priorities:", omega)
    for c in (True, False):
        print(f"P_0 c={c}:", eval_hflz(L0, temporal_pipeline(corpus.p0(c), A)))


if __name__ == "__main__":
    main()
