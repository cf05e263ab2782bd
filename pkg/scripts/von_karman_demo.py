"""Print the two-dimensional analysis of the von Karman form on p1 > 0."""

import json

from gbx.dsl import parse_scalar
from gbx.graded import GradedContext
from gbx.monge_ampere import analyze_2d, build_ma, ma_operator_scalar, von_karman_form


def main() -> None:
    ctx = GradedContext.cotangent(2, chart={"p1": 1})
    ma = build_ma(von_karman_form(ctx))
    rep = analyze_2d(ma)
    print(f"omega          = {ma.omega}")
    print(f"Pf(omega)      = {rep.pfaffian}  ({rep.type})")
    print(f"d tilde_omega  = {rep.d_normalized}")
    print(f"pi_omega       = {rep.pi_omega}")
    print(f"[pi_Omega, pi_omega] = {rep.schouten_pi_Omega_pi_omega}")
    for name, check in rep.checks.items():
        print(f"{name}: {check['verdict']}")
    f = parse_scalar("q1^3/6 + q1*q2^2")
    print(f"operator on {f}: {ma_operator_scalar(ma, f)}")
    print(json.dumps(rep.generalized["pi_Omega+J"], indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
