#pragma once

#include <iosfwd>
#include <string>

#include "poresim/network.hpp"

namespace poresim {

enum class NetworkFormat { CanonicalText };

struct NetworkReadOptions {
    NetworkFormat format = NetworkFormat::CanonicalText;
    /// Contact alpha used when an arc line omits the contact area, and when
    /// arcs are derived from tangency.
    double contact_alpha = kDefaultContactAlpha;
    /// When the file declares no arcs at all, derive them from ball tangency.
    bool derive_arcs_if_missing = true;
    double tangency_epsilon = 1e-6;
};

/// Canonical text format, one record per line:
///   B id x y z r [volume]
///   A i j [distance] [contact_area]
/// Lines starting with '#' are comments. Ball ids may be sparse; they are
/// remapped to dense 0-based indices (the original id is kept as
/// BallNode::external_id). Arcs with no distance get the Euclidean center
/// distance; arcs with no contact area get the min-radius disk rule.
PoreNetwork load_network(const std::string& path, const NetworkReadOptions& options = {});
PoreNetwork load_network(std::istream& in, const std::string& path_for_errors,
                         const NetworkReadOptions& options = {});

/// Writes the canonical text format with round-trip-exact floating point
/// fields. load_network(save_network(net)) reproduces every value bitwise.
void save_network(const PoreNetwork& net, const std::string& path);
void save_network(const PoreNetwork& net, std::ostream& out);

} // namespace poresim
