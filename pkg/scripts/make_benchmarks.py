"""Regenerate the bundled benchmark configs in canonical form."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from barriercert.config import dump_config, load_config  # noqa: E402

OUT = Path(__file__).resolve().parents[1] / "src" / "barriercert" / "benchmarks"

CONFIGS = {
    # ------------------------------------------------------------------
    # deterministic benchmarks (degree-2 one-shot targets)
    # ------------------------------------------------------------------
    "1d_system": {
        "name": "1d_system",
        "description": "1-D discrete-time test system with heating-style affine "
                       "dynamics (sampling time 5, heater coefficient 3.6e-3).",
        "mode": "dt-DS",
        "dim": 1,
        "b_degree": 2,
        "L_space": [-6], "U_space": [6],
        "L_initial": [-0.5], "U_initial": [0.5],
        "L_unsafe": [[-6]], "U_unsafe": [[-5]],
        "f": ["x1 + 5*(15 - x1 + 0.1*0.0036*(55 - x1))"],
    },
    "dc_motor": {
        "name": "dc_motor",
        "description": "2-D DC motor (armature current, shaft speed); sampling "
                       "time 0.01, R=1, L=0.01, J=0.01, b=1, k=0.01 inlined.",
        "mode": "dt-DS",
        "dim": 2,
        "b_degree": 2,
        "L_space": [0.1, 0.1], "U_space": [0.5, 1.0],
        "L_initial": [0.1, 0.1], "U_initial": [0.4, 1.0],
        "L_unsafe": [[0.45, 0.6]], "U_unsafe": [[0.5, 1.0]],
        "f": [
            "x1 + 0.01*(-(1/0.01)*x1 - (0.01/0.01)*x2)",
            "x2 + 0.01*((0.01/0.01)*x1 - (1/0.01)*x2)",
        ],
    },
    "barr2room_dt": {
        "name": "barr2room_dt",
        "description": "2-room temperature system; tau=5, alpha=0.05, "
                       "alpha_e1=0.005, alpha_e2=0.008, T_e=15. The printed "
                       "unsafe interval [22,23] is read as the square box "
                       "[22,23]^2.",
        "mode": "dt-DS",
        "dim": 2,
        "b_degree": 2,
        "L_space": [18, 18], "U_space": [23, 23],
        "L_initial": [18, 18], "U_initial": [19.75, 19.75],
        "L_unsafe": [[22, 22]], "U_unsafe": [[23, 23]],
        "f": [
            "(1 - 5*(0.05 + 0.005))*x1 + 5*0.05*x2 + 5*0.005*15",
            "(1 - 5*(0.05 + 0.008))*x2 + 5*0.05*x1 + 5*0.008*15",
        ],
    },
    "jet_engine": {
        "name": "jet_engine",
        "description": "Moore-Greitzer jet engine model (mass flow / pressure "
                       "rise coordinates).",
        "mode": "ct-DS",
        "dim": 2,
        "b_degree": 2,
        "L_space": [0.1, 0.1], "U_space": [1.0, 1.0],
        "L_initial": [0.1, 0.1], "U_initial": [0.5, 0.5],
        "L_unsafe": [[0.7, 0.7]], "U_unsafe": [[1.0, 1.0]],
        "f": ["-x2 - 1.5*x1^2 - 0.5*x1^3", "x1"],
    },
    "hi_ord_4": {
        "name": "hi_ord_4",
        "description": "4-D linear integrator chain benchmark. The published "
                       "unsafe box [-2.4,-1.6]^4 extends outside the state box "
                       "and is clipped to [-2,-1.6]^4.",
        "mode": "ct-DS",
        "dim": 4,
        "b_degree": 2,
        "L_space": [-2] * 4, "U_space": [2] * 4,
        "L_initial": [0.5] * 4, "U_initial": [1.5] * 4,
        "L_unsafe": [[-2] * 4], "U_unsafe": [[-1.6] * 4],
        "f": ["x2", "x3", "x4",
              "-3980*x4 - 4180*x3 - 2400*x2 - 576*x1"],
    },
    "hi_ord_6_1": {
        "name": "hi_ord_6_1",
        "description": "6-D linear integrator chain benchmark; unsafe box "
                       "clipped to the state box as in hi_ord_4.",
        "mode": "ct-DS",
        "dim": 6,
        "b_degree": 2,
        "L_space": [-2] * 6, "U_space": [2] * 6,
        "L_initial": [0.5] * 6, "U_initial": [1.5] * 6,
        "L_unsafe": [[-2] * 6], "U_unsafe": [[-1.6] * 6],
        "f": ["x2", "x3", "x4", "x5", "x6",
              "-800*x6 - 2273*x5 - 3980*x4 - 4180*x3 - 2400*x2 - 576*x1"],
    },
    "hi_ord_6_2": {
        "name": "hi_ord_6_2",
        "description": "6-D benchmark with cross couplings (-100x terms); "
                       "unsafe box clipped to the state box.",
        "mode": "ct-DS",
        "dim": 6,
        "b_degree": 2,
        "L_space": [-2] * 6, "U_space": [2] * 6,
        "L_initial": [0.5] * 6, "U_initial": [1.5] * 6,
        "L_unsafe": [[-2] * 6], "U_unsafe": [[-1.6] * 6],
        "f": ["x2 - 100*x3", "x3", "x4 - 100*x5", "x5", "x6 - 100*x1",
              "-800*x6 - 2273*x5 - 3980*x4 - 4180*x3 - 2400*x2 - 576*x1"],
    },
    "hi_ord_8_1": {
        "name": "hi_ord_8_1",
        "description": "8-D linear integrator chain benchmark.",
        "mode": "ct-DS",
        "dim": 8,
        "b_degree": 2,
        "L_space": [-2.2] * 8, "U_space": [2.2] * 8,
        "L_initial": [0.9] * 8, "U_initial": [1.1] * 8,
        "L_unsafe": [[-2.2] * 8], "U_unsafe": [[-1.8] * 8],
        "f": ["x2", "x3", "x4", "x5", "x6", "x7", "x8",
              "-20*x8 - 170*x7 - 800*x6 - 2273*x5 - 3980*x4 - 4180*x3 "
              "- 2400*x2 - 576*x1"],
    },
    "hi_ord_8_2": {
        "name": "hi_ord_8_2",
        "description": "8-D benchmark with -50x cross couplings.",
        "mode": "ct-DS",
        "dim": 8,
        "b_degree": 2,
        "L_space": [-2.2] * 8, "U_space": [2.2] * 8,
        "L_initial": [0.9] * 8, "U_initial": [1.1] * 8,
        "L_unsafe": [[-2.2] * 8], "U_unsafe": [[-1.8] * 8],
        "f": ["x2 - 50*x3", "x3 - 50*x4", "x4 - 50*x5", "x5 - 50*x6",
              "x6 - 50*x7", "x7 - 50*x8", "x8 - 50*x1",
              "-20*x8 - 170*x7 - 800*x6 - 2273*x5 - 3980*x4 - 4180*x3 "
              "- 2400*x2 - 576*x1"],
    },
    # ------------------------------------------------------------------
    # stochastic benchmarks (degree-4 optimize targets, lambda pinned)
    # ------------------------------------------------------------------
    "room_temp_dtss": {
        "name": "room_temp_dtss",
        "description": "1-D room temperature, discrete time, exponential noise "
                       "(rate 1, amplitude 0.1); T_h=45, T_e=-15, beta=0.06, "
                       "theta=0.145, valve -0.0120155x+0.8 inlined (beta "
                       "corrected from the published 0.6, which drives the "
                       "state straight into the unsafe band).",
        "mode": "dt-SS",
        "dim": 1,
        "b_degree": 4,
        "L_space": [1], "U_space": [50],
        "L_initial": [19.5], "U_initial": [20],
        "L_unsafe": [[1], [23]], "U_unsafe": [[17], [50]],
        "f": ["(1 - 0.06 - 0.145*(-0.0120155*x1 + 0.8))*x1 "
              "+ 0.145*45*(-0.0120155*x1 + 0.8) + 0.06*(-15) + 0.1*varsigma1"],
        "t": 5,
        "NoiseType": "exponential",
        "rate": [1.0],
        "optimize": True,
        "lam": 10,
    },
    "two_tanks": {
        "name": "two_tanks",
        "description": "Two coupled fluid tanks, Gaussian level noise "
                       "(sigma 0.01); tau=0.1, inflow 4.5, outflow -3 inlined.",
        "mode": "dt-SS",
        "dim": 2,
        "b_degree": 4,
        "L_space": [1, 1], "U_space": [10, 10],
        "L_initial": [1.75, 1.75], "U_initial": [2.25, 2.25],
        "L_unsafe": [[9, 9]], "U_unsafe": [[10, 10]],
        "f": [
            "(1 - 0.1*1)*x1 + 0.1*4.5 + varsigma1",
            "0.1*1*x1 + (1 - 0.1*1)*x2 + 0.1*(-3) + varsigma2",
        ],
        "t": 5,
        "NoiseType": "normal",
        "mean": [0, 0],
        "sigma": [0.01, 0.01],
        "optimize": True,
        "lam": 10,
    },
    "room_temp_3d": {
        "name": "room_temp_3d",
        "description": "3-room temperature network, Gaussian noise sigma 0.01; "
                       "tau=5, alpha=6.2e-3, alpha_e=8e-3, T_e=10. Dynamics "
                       "encoded exactly as published (the second update reads "
                       "x1 in its leading term).",
        "mode": "dt-SS",
        "dim": 3,
        "b_degree": 4,
        "L_space": [17, 17, 17], "U_space": [30, 30, 30],
        "L_initial": [17, 17, 17], "U_initial": [18, 18, 18],
        "L_unsafe": [[29, 29, 29]], "U_unsafe": [[30, 30, 30]],
        "f": [
            "(1 - 5*(0.0062 + 0.008))*x1 + 5*0.0062*x2 + 5*0.008*10 + varsigma1",
            "(1 - 5*(2*0.0062 + 0.008))*x1 + 5*0.0062*(x1 + x3) + 5*0.008*10 + varsigma2",
            "(1 - 5*(0.0062 + 0.008))*x3 + 5*0.0062*x2 + 5*0.008*10 + varsigma3",
        ],
        "t": 3,
        "NoiseType": "normal",
        "mean": [0, 0, 0],
        "sigma": [0.01, 0.01, 0.01],
        "optimize": True,
        "lam": 10,
    },
    "vdp_dtss": {
        "name": "vdp_dtss",
        "description": "Stochastic Van der Pol oscillator (sampling time 0.1), "
                       "uniform noise on [-0.02,0.02]^2. The unsafe set "
                       "[-6,-7] u [6,7] is encoded as two bands "
                       "[-7,-6]x[-7,7] and [6,7]x[-7,7].",
        "mode": "dt-SS",
        "dim": 2,
        "b_degree": 4,
        "L_space": [-7, -7], "U_space": [7, 7],
        "L_initial": [-5, -5], "U_initial": [5, 5],
        "L_unsafe": [[-7, -7], [6, -7]], "U_unsafe": [[-6, 7], [7, 7]],
        "f": [
            "x1 + 0.1*x2 + varsigma1",
            "x2 + 0.1*(-x1 + (1 - x1^2)*x2) + varsigma2",
        ],
        "t": 5,
        "NoiseType": "uniform",
        "a": [-0.02, -0.02],
        "b": [0.02, 0.02],
        "optimize": True,
        "lam": 1000,
    },
    "room_temp_ctss": {
        "name": "room_temp_ctss",
        "description": "1-D room temperature, continuous time, Brownian "
                       "diffusion 0.1 plus Poisson resets 0.1 at rate 0.1; "
                       "T_h=48, T_e=-15, eta=0.005, beta=0.06, theta=0.156 "
                       "(beta corrected from the published 0.6 as in the "
                       "discrete-time variant).",
        "mode": "ct-SS",
        "dim": 1,
        "b_degree": 4,
        "L_space": [1], "U_space": [50],
        "L_initial": [19.5], "U_initial": [20],
        "L_unsafe": [[1], [23]], "U_unsafe": [[17], [50]],
        "f": ["(-2*0.005 - 0.06 - 0.156*(-0.0120155*x1 + 0.7))*x1 "
              "+ 0.156*48*(-0.0120155*x1 + 0.7) + 0.06*(-15)"],
        "t": 5,
        "delta": ["0.1"],
        "rho": ["0.1"],
        "p_rate": [0.1],
        "optimize": True,
        "lam": 10,
    },
    "ex_lin1": {
        "name": "ex_lin1",
        "description": "2-D linear drift with state-dependent diffusion "
                       "0.5*x2 on the second coordinate.",
        "mode": "ct-SS",
        "dim": 2,
        "b_degree": 4,
        "L_space": [-3, -1.5], "U_space": [3, 3.5],
        "L_initial": [-0.25, 2.75], "U_initial": [0.25, 3.25],
        "L_unsafe": [[-3, -1.5]], "U_unsafe": [[3, -1]],
        "f": ["-5*x1 - 4*x2", "-x1 - 2*x2"],
        "t": 5,
        "delta": ["0", "0.5*x2"],
        "rho": 0,
        "optimize": True,
        "lam": 10,
    },
    "ex_nonlin1": {
        "name": "ex_nonlin1",
        "description": "2-D nonlinear drift (cubic restoring force) with "
                       "constant diffusion 0.5 on the second coordinate.",
        "mode": "ct-SS",
        "dim": 2,
        "b_degree": 4,
        "L_space": [-3, -3], "U_space": [3, 3],
        "L_initial": [-1, -1], "U_initial": [1, 1],
        "L_unsafe": [[-3, 2.25]], "U_unsafe": [[3, 3]],
        "f": ["x2", "-x1 - x2 - 0.5*x1^3"],
        "t": 5,
        "delta": ["0", "0.5"],
        "rho": 0,
        "optimize": True,
        "lam": 10,
    },
    "hi_ord_4_stochastic": {
        "name": "hi_ord_4_stochastic",
        "description": "4-D integrator chain with diffusion 0.1 on every "
                       "coordinate (single shared Brownian motion); unsafe "
                       "box clipped to the state box.",
        "mode": "ct-SS",
        "dim": 4,
        "b_degree": 4,
        "L_space": [-2] * 4, "U_space": [2] * 4,
        "L_initial": [0.5] * 4, "U_initial": [1.5] * 4,
        "L_unsafe": [[-2] * 4], "U_unsafe": [[-1.6] * 4],
        "f": ["x2", "x3", "x4",
              "-3980*x4 - 4180*x3 - 2400*x2 - 576*x1"],
        "t": 3,
        "delta": ["0.1", "0.1", "0.1", "0.1"],
        "rho": 0,
        "optimize": True,
        "lam": 10,
    },
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for name, data in CONFIGS.items():
        config = load_config(data)
        path = OUT / f"{name}.json"
        path.write_text(dump_config(config), encoding="utf-8")
        print(f"wrote {path.name}")


if __name__ == "__main__":
    main()
