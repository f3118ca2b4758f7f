#pragma once

#include <string>

#include "json.hpp"

#include "kdvcm/exptrig.hpp"
#include "kdvcm/lyapunov.hpp"
#include "kdvcm/manifold.hpp"
#include "kdvcm/reduced.hpp"
#include "kdvcm/spectral.hpp"

namespace kdv {

using Json = nlohmann::ordered_json;

/// {terms: [{sigma, omega, coefCos, coefSin}], domainLength}
Json to_json(const ExpTrigPoly& p);
ExpTrigPoly exptrig_from_json(const Json& j);

/// {gridSize, eigenvalues: [{re, im}], nearestPair: {re, im}, gap, rawGap, resolvedCutoff}
Json to_json(const SpectrumReport& r);

/// {q, theta, phi1, phi2}
Json to_json(const EigenPair& p);

/// {a, b, c, aPrime0, bPrime0, cPrime0}
Json to_json(const ManifoldCoeffs& m);

Json to_json(const CubicCoefficients& k);
Json to_json(const NormalForm& nf);

/// {radius, mu, samples, maxVdot, argmin: {m1, m2}, eta1Estimate}
Json to_json(const ScanReport& r);

/// Two-space indented text with every float printed as %.17g (non-finite
/// values become null), so output is byte-stable across runs.
std::string dump_json(const Json& j);

/// Writes dump_json(j); throws
/// std::runtime_error if the file cannot be written.
void write_json_file(const std::string& path, const Json& j);

}  // namespace kdv
