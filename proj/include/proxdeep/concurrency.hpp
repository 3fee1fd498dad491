#pragma once

#include <functional>

namespace proxdeep {

// Worker cap for the embarrassingly parallel loops (path chains, perturb
// refits). Reads PROXDEEP_THREADS once; defaults to 1. force_sequential
// overrides everything.
int effective_workers();
void force_sequential(bool on);

// Runs fn(i) for i in [0, n). Work items must be independent; results are
// identical regardless of the worker count because each item writes only
// its own slot.
void run_indexed(int n, const std::function<void(int)>& fn);

}  // namespace proxdeep
