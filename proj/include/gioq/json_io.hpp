// Copyright 2026 The gioq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gioq/channels.hpp"

namespace gioq {

/// Wire format for matrices: {"dim": d, "entries": [[re, im], ...]} with
/// dim*dim pairs in row-major order.
inline nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json entries = nlohmann::json::array();
    for (const cplx& z : m.entries) entries.push_back({z.real(), z.imag()});
    return {{"dim", m.dim}, {"entries", std::move(entries)}};
}

inline ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
        throw std::invalid_argument("matrix document: expected object with 'dim' and 'entries'");
    if (!j["dim"].is_number_integer()) throw std::invalid_argument("matrix document: 'dim' must be an integer");
    const int d = j["dim"].get<int>();
    if (d <= 0) throw std::invalid_argument("matrix document: 'dim' must be positive");
    const auto& entries = j["entries"];
    if (!entries.is_array() || entries.size() != static_cast<size_t>(d) * d)
        throw std::invalid_argument("matrix document: 'entries' must hold dim*dim pairs");
    ComplexMatrix m(d);
    for (size_t k = 0; k < entries.size(); ++k) {
        const auto& pair = entries[k];
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
            throw std::invalid_argument("matrix document: each entry must be a [re, im] pair");
        m.entries[k] = cplx(pair[0].get<double>(), pair[1].get<double>());
    }
    if (!m.all_finite()) throw std::invalid_argument("matrix document: non-finite entries");
    return m;
}

/// FNV-1a content hash used for the input digests in run reports.
inline uint64_t fnv1a64(std::string_view bytes) {
    uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string digest_hex(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
    return std::string(buf);
}

struct ResolvedMatrix {
    ComplexMatrix mat;
    std::string digest;  // content hash of the file, or of the inline spec
};

/// Resolve a state/observable argument: either a JSON file path or one of
/// the built-in named forms
///   psi-plus         (dimension taken from fallback_dim)
///   psi-plus:d
///   rho-p:d:p
inline ResolvedMatrix resolve_matrix_spec(const std::string& spec, int fallback_dim = 0) {
    auto named = [&](const ComplexMatrix& m) { return ResolvedMatrix{m, digest_hex(spec)}; };

    if (spec == "psi-plus" || spec.rfind("psi-plus:", 0) == 0) {
        int d = fallback_dim;
        if (spec.size() > 9) {
            try {
                d = std::stoi(spec.substr(9));
            } catch (...) {
                throw std::invalid_argument("named state: bad dimension in '" + spec + "'");
            }
        }
        if (d < 2) throw std::invalid_argument("named state: psi-plus needs a dimension >= 2");
        return named(maximally_coherent(d).mat);
    }
    if (spec.rfind("rho-p:", 0) == 0) {
        const std::string rest = spec.substr(6);
        const size_t colon = rest.find(':');
        if (colon == std::string::npos) throw std::invalid_argument("named state: rho-p takes the form rho-p:d:p");
        int d = 0;
        double p = -1.0;
        try {
            d = std::stoi(rest.substr(0, colon));
            p = std::stod(rest.substr(colon + 1));
        } catch (...) {
            throw std::invalid_argument("named state: bad parameters in '" + spec + "'");
        }
        if (d < 2) throw std::invalid_argument("named state: rho-p needs a dimension >= 2");
        return named(rho_p(d, p).mat);
    }

    std::ifstream in(spec, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open input file '" + spec + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("file '" + spec + "' is not valid JSON: " + e.what());
    }
    return ResolvedMatrix{matrix_from_json(j), digest_hex(bytes)};
}

}  // namespace gioq
