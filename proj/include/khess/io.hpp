#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "khess/cones.hpp"
#include "khess/dirichlet.hpp"
#include "khess/eigen.hpp"
#include "khess/geometry.hpp"
#include "khess/radial.hpp"

namespace khess {

using Json = nlohmann::json;

// Doubles as %.17g (round-trip safe).
std::string format_double(double v);

// {"n": N, "entries": [[...], ...]} or {"n": N, "entries": [flat row-major]}
// or a bare nested array. DomainError on malformed or non-symmetric input.
SymMatrix matrix_from_json(const Json& j);
SymMatrix read_matrix_file(const std::string& path);
Json matrix_to_json(const SymMatrix& a);

// CSV with header r,h,hp,hpp.
void write_profile_csv(std::ostream& os, const RadialProfile& p);
void write_profile_csv(const std::string& path, const RadialProfile& p);
RadialProfile read_profile_csv(std::istream& is, int dim, int k);
RadialProfile read_profile_csv(const std::string& path, int dim, int k);
Json profile_to_json(const RadialProfile& p);
RadialProfile profile_from_json(const Json& j);

// CSV with header r,f.
SourceTerm read_source_csv(std::istream& is);
SourceTerm read_source_csv(const std::string& path);

// {"dim": N, "samples": [{"point": [...], "kappa": [...]}, ...]} or a bare
// list of samples (dim inferred from kappa length).
CurvatureField field_from_json(const Json& j);
CurvatureField read_field_file(const std::string& path);
Json field_to_json(const CurvatureField& f);

Json estimate_to_json(const SpectralEstimate& e, const std::string& profile_ref);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace khess
