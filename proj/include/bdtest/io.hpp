#pragma once

// Text formats.
//
//   function file      n d a b, then n^d values in row-major order
//   bounds file        per dimension: n-1 lower values, then n-1 upper values;
//                      inf and -inf are accepted
//   distribution file  n d N, then d rows of n integer masses summing to N
//
// Tokens are whitespace separated; '#' starts a comment running to end of line.

#include "bdtest/bounds.hpp"
#include "bdtest/distributions.hpp"
#include "bdtest/testers.hpp"
#include "bdtest/violation.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace bdt {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

FunctionTable parse_function(std::string_view text);
std::string format_function(const FunctionTable& f);

BoundingFamily parse_bounds(std::string_view text, const HypergridDomain& domain);
std::string format_bounds(const BoundingFamily& bounds);

// "monotone", "lipschitz:c" or "const:l:u"; nullopt when `spec` is not a preset name.
std::optional<BoundingFamily> bounds_preset(std::string_view spec, const HypergridDomain& domain);
// A preset, or else the path of a bounds file.
BoundingFamily load_bounds(const std::string& spec, const HypergridDomain& domain);

ProductDistribution parse_distribution(std::string_view text);
std::string format_distribution(const ProductDistribution& dist);

// Real probabilities: a header "n d", then d rows of n non-negative weights.
std::vector<std::vector<double>> parse_probabilities(std::string_view text, int& side);

std::string verdict_json(const Verdict& verdict);
// p = 2 adds bounds on the L2 distance implied by the L1 distance d1: it is at
// least d1, and at most sqrt(d1) when every l <= 0 <= u (clamping to [a, b]
// then keeps a closest function inside P).
std::string distance_json(const DistanceResult& result, int p, const BoundingFamily& bounds);

} // namespace bdt
