#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>

#include "phs/cli.hpp"
#include "phs/errors.hpp"

namespace phs::cli {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Splits on `sep` at parenthesis depth zero.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw SpecError("unbalanced parentheses in \"" + s + "\"");
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (depth != 0) throw SpecError("unbalanced parentheses in \"" + s + "\"");
  parts.push_back(trim(cur));
  return parts;
}

double parse_number(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  if (t.empty()) throw SpecError(context + ": empty argument");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || !std::isfinite(v))
    throw SpecError(context + ": \"" + t + "\" is not a number");
  return v;
}

struct Atom {
  std::function<ComplexVector(double)> eval;
  Eigen::Index width = 1;
};

Atom parse_atom(const std::string& text) {
  const auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')')
    throw SpecError("expected profile(args), got \"" + text + "\"");
  const std::string name = trim(text.substr(0, open));
  std::string inner = text.substr(open + 1, text.size() - open - 2);
  for (char& c : inner)
    if (c == '(' || c == ')') c = ' ';
  std::vector<double> args;
  for (const auto& a : split_top(inner, ',')) args.push_back(parse_number(a, name));

  auto need = [&](std::size_t count, bool at_least) {
    if (at_least ? args.size() < count : args.size() != count)
      throw SpecError(name + ": expected " + (at_least ? "at least " : "") + std::to_string(count) +
                      " argument(s), got " + std::to_string(args.size()));
  };
  auto vec = [](const std::vector<double>& v, std::size_t from) {
    ComplexVector out(static_cast<Eigen::Index>(v.size() - from));
    for (std::size_t i = from; i < v.size(); ++i) out(static_cast<Eigen::Index>(i - from)) = v[i];
    return out;
  };

  if (name == "sine") {
    need(1, false);
    const double k = args[0];
    return {[k](double z) { return ComplexVector::Constant(1, std::sin(k * std::numbers::pi * z)); }, 1};
  }
  if (name == "gaussian") {
    need(2, false);
    const double c = args[0], w = args[1];
    if (!(w > 0.0)) throw SpecError("gaussian: width must be positive");
    return {[c, w](double z) {
              return ComplexVector::Constant(1, std::exp(-(z - c) * (z - c) / (2.0 * w * w)));
            },
            1};
  }
  if (name == "constant") {
    need(1, true);
    const ComplexVector v = vec(args, 0);
    return {[v](double) { return v; }, v.size()};
  }
  if (name == "indicator") {
    need(3, true);
    const double a = args[0], b = args[1];
    const ComplexVector v = vec(args, 2);
    return {[a, b, v](double z) {
              return (z >= a && z <= b) ? v : ComplexVector(ComplexVector::Zero(v.size()));
            },
            v.size()};
  }
  throw SpecError("unknown profile \"" + name + "\" (known: sine, gaussian, constant, indicator)");
}

}  // namespace

InitialProfile InitialProfile::parse(const std::string& spec) {
  if (trim(spec).empty()) throw SpecError("empty initial-condition spec");
  InitialProfile p;
  for (const auto& term_text : split_top(spec, ';')) {
    if (term_text.empty()) throw SpecError("empty term in \"" + spec + "\"");
    std::vector<Atom> atoms;
    for (const auto& a : split_top(term_text, '+')) atoms.push_back(parse_atom(a));
    const Eigen::Index width = atoms.front().width;
    for (const auto& a : atoms)
      if (a.width != width)
        throw SpecError("terms summed with '+' must have equal widths in \"" + term_text + "\"");
    p.widths_.push_back(width);
    p.terms_.push_back([atoms](double z) {
      ComplexVector acc = atoms.front().eval(z);
      for (std::size_t i = 1; i < atoms.size(); ++i) acc += atoms[i].eval(z);
      return acc;
    });
  }
  return p;
}

ComplexVector InitialProfile::operator()(double zeta) const {
  Eigen::Index total = 0;
  for (auto w : widths_) total += w;
  ComplexVector out(total);
  Eigen::Index at = 0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    out.segment(at, widths_[t]) = terms_[t](zeta);
    at += widths_[t];
  }
  return out;
}

sim::InitialField InitialProfile::for_dimension(Eigen::Index n) const {
  Eigen::Index total = 0;
  for (auto w : widths_) total += w;
  if (total == 1 && n > 1) {
    const InitialProfile self = *this;
    return [self, n](double z) { return ComplexVector(ComplexVector::Constant(n, self(z)(0))); };
  }
  if (total != n)
    throw SpecError("initial condition has " + std::to_string(total) + " components, system has " +
                    std::to_string(n));
  const InitialProfile self = *this;
  return [self](double z) { return self(z); };
}

sim::InitialField x0_from_spec(const std::string& spec, Eigen::Index n) {
  return InitialProfile::parse(spec).for_dimension(n);
}

}  // namespace phs::cli
