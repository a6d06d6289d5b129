#pragma once

#include <string>
#include <string_view>

#include "mot/coupling.hpp"

namespace mot {

// Accepts "p/q", integers and terminating decimals (optionally with an exponent); exact.
Rational parse_rational(std::string_view text);
double parse_double(std::string_view text);

template <class T>
T parse_scalar(std::string_view text);

// JSON schemas:
//   measure  {"atoms":[{"x":"-1","w":"1/4"},...]}
//   coupling {"points":[{"x":"-1","y":"-2","w":"1/6"},...]}
//   lifted   {"segments":[{"a":"0","b":"1/4","x":"-1","kernel":{"atoms":[...]}},...]}
// Malformed input raises ParseError with the line and column of the problem.
template <class T>
DiscreteMeasure<T> measure_from_json(std::string_view text);
template <class T>
DiscreteCoupling<T> coupling_from_json(std::string_view text);
template <class T>
LiftedCoupling<T> lifted_from_json(std::string_view text);

template <class T>
std::string to_json(const DiscreteMeasure<T>& m);
template <class T>
std::string to_json(const DiscreteCoupling<T>& c);
template <class T>
std::string to_json(const LiftedCoupling<T>& l);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

}  // namespace mot
