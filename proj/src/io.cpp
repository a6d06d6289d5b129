#include "mot/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mot {

using json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

[[noreturn]] void bad_scalar(std::string_view text) {
  throw ParseError("not a scalar: \"" + std::string(text) + "\"");
}

Rational integer_text(std::string_view s, std::string_view whole) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) bad_scalar(whole);
  Rational r{std::string(s)};
  return neg ? Rational(-r) : r;
}

Rational power_of_ten(long e) {
  Rational p(1);
  const Rational ten(10);
  for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= ten;
  return e < 0 ? Rational(Rational(1) / p) : p;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.empty()) bad_scalar(text);
  if (const auto slash = s.find('/'); slash != std::string_view::npos) {
    const Rational num = integer_text(trim(s.substr(0, slash)), text);
    const std::string_view den_text = trim(s.substr(slash + 1));
    if (!all_digits(den_text)) bad_scalar(text);
    const Rational den(std::string{den_text});
    if (den.is_zero()) throw ParseError("zero denominator in \"" + std::string(text) + "\"");
    return num / den;
  }
  std::string_view mant = s;
  long exp10 = 0;
  if (const auto e = s.find_first_of("eE"); e != std::string_view::npos) {
    mant = s.substr(0, e);
    std::string_view et = s.substr(e + 1);
    if (!et.empty() && et.front() == '+') et.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(et.data(), et.data() + et.size(), exp10);
    if (ec != std::errc() || ptr != et.data() + et.size() || exp10 > 4000 || exp10 < -4000) bad_scalar(text);
  }
  bool neg = false;
  if (!mant.empty() && (mant.front() == '-' || mant.front() == '+')) {
    neg = mant.front() == '-';
    mant.remove_prefix(1);
  }
  std::string digits;
  if (const auto dot = mant.find('.'); dot != std::string_view::npos) {
    const std::string_view ip = mant.substr(0, dot), fp = mant.substr(dot + 1);
    if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
      bad_scalar(text);
    digits = std::string(ip) + std::string(fp);
    exp10 -= static_cast<long>(fp.size());
  } else {
    if (!all_digits(mant)) bad_scalar(text);
    digits = std::string(mant);
  }
  Rational r = Rational{digits} * power_of_ten(exp10);
  return neg ? Rational(-r) : r;
}

double parse_double(std::string_view text) {
  const std::string_view s = trim(text);
  if (s.find('/') != std::string_view::npos) return num::to_double(parse_rational(s));
  double v = 0.0;
  const char* b = s.data();
  if (!s.empty() && s.front() == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) bad_scalar(text);
  return v;
}

template <>
Rational parse_scalar<Rational>(std::string_view text) {
  return parse_rational(text);
}
template <>
double parse_scalar<double>(std::string_view text) {
  return parse_double(text);
}

namespace {

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
}

template <class T>
T scalar_field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  const json& v = obj.at(key);
  if (v.is_string()) return parse_scalar<T>(v.get<std::string>());
  if (v.is_number_integer() || v.is_number_unsigned()) return parse_scalar<T>(v.dump());
  // Floating JSON numbers are re-read from their shortest decimal form.
  if (v.is_number_float()) return parse_scalar<T>(v.dump());
  throw ParseError(std::string("field \"") + key + "\" is not a scalar");
}

const json& array_field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || !obj.at(key).is_array())
    throw ParseError(std::string("expected an array field \"") + key + "\"");
  return obj.at(key);
}

template <class T>
DiscreteMeasure<T> measure_from(const json& j) {
  std::vector<Atom<T>> atoms;
  for (const json& a : array_field(j, "atoms")) atoms.push_back({scalar_field<T>(a, "x"), scalar_field<T>(a, "w")});
  if (atoms.empty()) throw ParseError("a measure needs at least one atom");
  for (const auto& a : atoms)
    if (num::lt(a.w, T(0))) throw StructuralError("negative atom weight");
  return DiscreteMeasure<T>(combine_atoms(std::move(atoms)));
}

template <class T>
json measure_json(const DiscreteMeasure<T>& m) {
  json atoms = json::array();
  for (const auto& a : m.atoms()) atoms.push_back({{"x", format_scalar(a.x)}, {"w", format_scalar(a.w)}});
  return json{{"atoms", atoms}};
}

}  // namespace

template <class T>
DiscreteMeasure<T> measure_from_json(std::string_view text) {
  return measure_from<T>(parse_json(text));
}

template <class T>
DiscreteCoupling<T> coupling_from_json(std::string_view text) {
  const json j = parse_json(text);
  std::vector<Point<T>> pts;
  for (const json& p : array_field(j, "points"))
    pts.push_back({scalar_field<T>(p, "x"), scalar_field<T>(p, "y"), scalar_field<T>(p, "w")});
  if (pts.empty()) throw ParseError("a coupling needs at least one point");
  return DiscreteCoupling<T>(std::move(pts));
}

template <class T>
LiftedCoupling<T> lifted_from_json(std::string_view text) {
  const json j = parse_json(text);
  std::vector<Segment<T>> segs;
  for (const json& s : array_field(j, "segments")) {
    if (!s.contains("kernel")) throw ParseError("segment without a kernel");
    segs.push_back({scalar_field<T>(s, "a"), scalar_field<T>(s, "b"), scalar_field<T>(s, "x"),
                    measure_from<T>(s.at("kernel"))});
  }
  if (segs.empty()) throw ParseError("a lifted coupling needs at least one segment");
  return LiftedCoupling<T>(std::move(segs));
}

template <class T>
std::string to_json(const DiscreteMeasure<T>& m) {
  return measure_json(m).dump(2) + "\n";
}

template <class T>
std::string to_json(const DiscreteCoupling<T>& c) {
  json pts = json::array();
  for (const auto& p : c.points())
    pts.push_back({{"x", format_scalar(p.x)}, {"y", format_scalar(p.y)}, {"w", format_scalar(p.w)}});
  return json{{"points", pts}}.dump(2) + "\n";
}

template <class T>
std::string to_json(const LiftedCoupling<T>& l) {
  json segs = json::array();
  for (const auto& s : l.segments())
    segs.push_back({{"a", format_scalar(s.a)},
                    {"b", format_scalar(s.b)},
                    {"x", format_scalar(s.x)},
                    {"kernel", measure_json(s.kernel)}});
  return json{{"segments", segs}}.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << text;
}

#define MOT_INSTANTIATE(T)                                                   \
  template DiscreteMeasure<T> measure_from_json<T>(std::string_view);        \
  template DiscreteCoupling<T> coupling_from_json<T>(std::string_view);      \
  template LiftedCoupling<T> lifted_from_json<T>(std::string_view);          \
  template std::string to_json(const DiscreteMeasure<T>&);                   \
  template std::string to_json(const DiscreteCoupling<T>&);                  \
  template std::string to_json(const LiftedCoupling<T>&);

MOT_INSTANTIATE(Rational)
MOT_INSTANTIATE(double)

}  // namespace mot
