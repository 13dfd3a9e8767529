def _outcome(run):
    if isinstance(run, dict):
        return run["success"], run["elapsed"]
    return run.success, run.elapsed


def compute_metrics(runs, budget):
    """
    Success rate and weighted planning time of runs sharing one budget.
    Failed runs count with the full budget, solved runs with their elapsed time
    (at most the budget).

    Raises:
        ValueError: for an empty list of runs or a non-positive budget.
    """
    runs = list(runs)
    if not runs:
        raise ValueError("Can not compute metrics without runs")
    if not budget > 0:
        raise ValueError(f"The budget needs to be positive, got {budget}")

    successes = 0
    weighted_time = 0.0
    for run in runs:
        success, elapsed = _outcome(run)
        if success:
            successes += 1
            weighted_time += min(elapsed, budget)
        else:
            weighted_time += budget

    return successes / len(runs), weighted_time / len(runs)


def improvement(new, baseline):
    """Relative change of ``new`` over ``baseline`` in percent, None without a baseline."""
    if not baseline:
        return None
    return 100.0 * (new - baseline) / baseline
