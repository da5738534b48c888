"""roughwave: pathwise solvers and diagnostics for 1+1D linear hyperbolic
systems whose coefficients and data are rough random fields.

The workflow is: sample a process (fields), smooth it into a differentiable
family indexed by a scale parameter (mollify), transport along
characteristics (characteristics, hypsolve), then measure how norms of the
family behave as the scale shrinks (asymptotics).  Ready-made experiment
drivers live in scenarios; the command line front end in cli.
"""

__version__ = "0.1.0"
