#include "kdvcm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace kdv {

Json to_json(const ExpTrigPoly& p) {
  Json terms = Json::array();
  for (const auto& t : p.terms()) {
    terms.push_back({{"sigma", t.sigma}, {"omega", t.omega}, {"coefCos", t.coef_cos}, {"coefSin", t.coef_sin}});
  }
  return {{"terms", std::move(terms)}, {"domainLength", p.domain_length()}};
}

ExpTrigPoly exptrig_from_json(const Json& j) {
  std::vector<ExpTrigTerm> terms;
  for (const auto& t : j.at("terms")) {
    terms.push_back({t.at("sigma").get<double>(), t.at("omega").get<double>(),
                     t.at("coefCos").get<double>(), t.at("coefSin").get<double>()});
  }
  return ExpTrigPoly(j.at("domainLength").get<double>(), std::move(terms));
}

Json to_json(const SpectrumReport& r) {
  Json ev = Json::array();
  for (const auto& e : r.eigenvalues) ev.push_back({{"re", e.real()}, {"im", e.imag()}});
  return {{"gridSize", r.grid_size},
          {"eigenvalues", std::move(ev)},
          {"nearestPair", {{"re", r.nearest_pair.real()}, {"im", r.nearest_pair.imag()}}},
          {"gap", r.gap},
          {"rawGap", r.raw_gap},
          {"resolvedCutoff", r.resolved_cutoff}};
}

Json to_json(const EigenPair& p) {
  return {{"q", p.q}, {"theta", p.theta}, {"phi1", to_json(p.phi1)}, {"phi2", to_json(p.phi2)}};
}

Json to_json(const ManifoldCoeffs& m) {
  return {{"a", to_json(m.a)},           {"b", to_json(m.b)},           {"c", to_json(m.c)},
          {"aPrime0", m.a_prime0}, {"bPrime0", m.b_prime0}, {"cPrime0", m.c_prime0}};
}

Json to_json(const CubicCoefficients& k) {
  return {{"A1", k.A1}, {"B1", k.B1}, {"C1", k.C1}, {"D1", k.D1},
          {"A2", k.A2}, {"B2", k.B2}, {"C2", k.C2}, {"D2", k.D2}};
}

namespace {
Json complex_json(std::complex<double> z) { return {{"re", z.real()}, {"im", z.imag()}}; }
}  // namespace

Json to_json(const NormalForm& nf) {
  return {{"g20", complex_json(nf.g20)}, {"g11", complex_json(nf.g11)}, {"g02", complex_json(nf.g02)},
          {"g21", complex_json(nf.g21)}, {"rho1", nf.rho1},             {"rho2", nf.rho2},
          {"rho1SingleA1", nf.rho1_single_a1}};
}

Json to_json(const ScanReport& r) {
  return {{"radius", r.radius},
          {"mu", r.mu},
          {"samples", r.samples},
          {"maxVdot", r.max_vdot},
          {"argmin", {{"m1", r.argmax.m1}, {"m2", r.argmax.m2}}},
          {"eta1Estimate", r.eta1_estimate}};
}

namespace {

void dump_into(std::string& out, const Json& j, int depth) {
  const auto pad = [&](int d) { out.append(static_cast<std::size_t>(2 * d), ' '); };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(depth + 1);
        out += Json(key).dump();
        out += ": ";
        dump_into(out, value, depth + 1);
      }
      out += '\n';
      pad(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) out += ",\n";
        pad(depth + 1);
        dump_into(out, j[i], depth + 1);
      }
      out += '\n';
      pad(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_into(out, j, 0);
  out += '\n';
  return out;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << dump_json(j);
  if (!os) throw std::runtime_error("cannot write " + path);
}

}  // namespace kdv
