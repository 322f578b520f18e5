"""Training on thinned documents is practice at altitude: a rule that keeps
its thinned-measure error at eps performs like eps^(1/(1-delta)) on raw
documents.

For fixed linear scores over Poisson counts this script measures both error
rates by Monte Carlo, compares them with their Gaussian predictions, and
evaluates the explicit conversion bound.  The empirical exponent
log(eps) / log(eps_thinned) is reported against its target 1/(1-delta).
"""

from droplab import run_altitude_sweep
from droplab.presets import default_sweep_configs


def main():
    mc = 2_000_000
    results = run_altitude_sweep(default_sweep_configs(), mc, master_seed=0)
    hdr = (f"{'intensity':>16} {'delta':>6} {'eps':>10} {'eps~':>10} "
           f"{'gauss eps':>10} {'bound':>10} {'exp':>6} {'target':>7}")
    print(f"Monte Carlo with {mc:,} documents per configuration\n\n{hdr}")
    for r in results:
        lam = "({:g}, {:g})".format(*r.config.intensity)
        bound = "vacuous" if r.bound.vacuous else f"{r.bound.value:.4f}"
        print(f"{lam:>16} {r.config.delta:>6.2f} {r.eps:>10.3e} "
              f"{r.eps_thinned:>10.3e} {r.gaussian_eps:>10.3e} {bound:>10} "
              f"{r.exponent:>6.3f} {r.exponent_target:>7.3f}")
    print("\nThe raw-measure error is far below the thinned-measure error,")
    print("and whenever the bound is non-vacuous the measured error stays")
    print("under it.  The exponent approaches its target as the score's")
    print("z-ratio grows (it sits below the target at moderate z).")


if __name__ == "__main__":
    main()
