"""Hitchin invariants and orbit names of the three normal forms in dimension 3."""

from gbx.graded import GradedContext
from gbx.monge_ampere import analyze_3d, build_ma, hess_form, pssl_form, sl_form


def main() -> None:
    ctx = GradedContext.cotangent(3)
    for name, builder in (("hess", hess_form), ("SL", sl_form), ("psSL", pssl_form)):
        rep = analyze_3d(build_ma(builder(ctx)))
        print(f"{name:5s} lambda = {str(rep.lam):3s} signature = {rep.q_signature}  orbit = {rep.orbit}")


if __name__ == "__main__":
    main()
