#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "phs/simulator.hpp"

namespace phs::cli {

/// Process exit codes of the `phs` tool.
enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,      // numerical failure (blow-up, singular data, I/O)
  kInvalidModel = 2, // schema or validation error
  kIllPosed = 3,     // simulate on a non-generator without --allow-illposed
  kUsage = 64,
};

/// Initial-condition sampler parsed from a profile string.
///
/// Grammar:
///   spec  := term (';' term)*      one term per component, or one term for all
///   term  := atom ('+' atom)*      pointwise sum
///   atom  := sine(k)               sin(kπζ)
///          | gaussian(c, w)        exp(-(ζ-c)²/(2w²)), peak 1
///          | constant(v...)        the vector v (or a scalar)
///          | indicator(a, b, v...) v on [a,b], 0 elsewhere
/// Vector arguments may be wrapped in parentheses: indicator(0.2,0.8,(1,0)).
class InitialProfile {
 public:
  /// Throws SpecError on unknown profiles or malformed arguments.
  static InitialProfile parse(const std::string& spec);

  /// Sampler for an n-component system. A single scalar term is broadcast to
  /// every component; otherwise the component count must match n.
  sim::InitialField for_dimension(Eigen::Index n) const;

  /// Values of every term at ζ, concatenated.
  ComplexVector operator()(double zeta) const;

 private:
  using Term = std::function<ComplexVector(double)>;
  std::vector<Term> terms_;
  std::vector<Eigen::Index> widths_;
};

/// x0_from_spec: parse + bind to dimension n.
sim::InitialField x0_from_spec(const std::string& spec, Eigen::Index n);

/// Entry point of the `phs` tool; `args` excludes the program name.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phs::cli
