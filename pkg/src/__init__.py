"""
macroforge - fixed-outline macro placement.

Modules:
- netlist: design model, JSON files and the synthetic generator
- connectivity: macro groups, cell clusters and the connection matrix
- prototyper: analytical mixed-size prototype with a density schedule
- abplace: angle-based placement of macros on a shrinking ellipse
- packing: corner packing trees, contours and mutations
- relocator: preference matrix, cost model and evolutionary corner search
- driver: configuration and the outer placement loop
- evaluator: metrics, baselines, SVG rendering and timings
- tuner: Bayesian optimization of the cost weights
"""

__version__ = "0.1.0"
