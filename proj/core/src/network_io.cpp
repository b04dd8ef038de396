#include "poresim/network_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "poresim/errors.hpp"

namespace poresim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct RawArc {
    long long i, j;
    double distance;     // NaN when absent
    double contact_area; // NaN when absent
    long line;
};

} // namespace

PoreNetwork load_network(const std::string& path, const NetworkReadOptions& options) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open network file: " + path);
    return load_network(in, path, options);
}

PoreNetwork load_network(std::istream& in, const std::string& path, const NetworkReadOptions& options) {
    std::vector<BallNode> nodes;
    std::vector<RawArc> raw_arcs;
    std::unordered_map<long long, int> id_map;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue; // blank line
        if (tag[0] == '#') continue;

        if (tag == "B") {
            BallNode b;
            double x, y, z;
            if (!(ls >> b.external_id >> x >> y >> z >> b.radius))
                throw ParseError(path, line_no, "malformed ball record: '" + line + "'");
            b.center = {x, y, z};
            if (!(ls >> b.volume)) b.volume = ball_volume(b.radius);
            if (!(b.radius > 0.0))
                throw ValidationError(path + ":" + std::to_string(line_no) +
                                      ": non-positive radius for ball " +
                                      std::to_string(b.external_id));
            b.id = static_cast<int>(nodes.size());
            if (!id_map.emplace(b.external_id, b.id).second)
                throw ValidationError(path + ":" + std::to_string(line_no) + ": duplicate ball id " +
                                      std::to_string(b.external_id));
            nodes.push_back(b);
        } else if (tag == "A") {
            RawArc a{0, 0, std::nan(""), std::nan(""), line_no};
            if (!(ls >> a.i >> a.j))
                throw ParseError(path, line_no, "malformed arc record: '" + line + "'");
            ls >> a.distance >> a.contact_area;
            raw_arcs.push_back(a);
        } else {
            throw ParseError(path, line_no, "unknown record tag '" + tag + "'");
        }
    }

    std::vector<AdjacencyArc> arcs;
    arcs.reserve(raw_arcs.size());
    for (const RawArc& r : raw_arcs) {
        auto it_i = id_map.find(r.i);
        auto it_j = id_map.find(r.j);
        if (it_i == id_map.end() || it_j == id_map.end())
            throw ValidationError(path + ":" + std::to_string(r.line) + ": arc (" +
                                  std::to_string(r.i) + "," + std::to_string(r.j) +
                                  ") references an unknown ball id");
        AdjacencyArc a;
        a.i = it_i->second;
        a.j = it_j->second;
        const BallNode& bi = nodes[static_cast<size_t>(a.i)];
        const BallNode& bj = nodes[static_cast<size_t>(a.j)];
        a.distance = std::isnan(r.distance) ? distance(bi.center, bj.center) : r.distance;
        a.contact_area = std::isnan(r.contact_area)
                             ? compute_contact_area(bi.radius, bj.radius, options.contact_alpha)
                             : r.contact_area;
        arcs.push_back(a);
    }

    if (arcs.empty() && options.derive_arcs_if_missing)
        arcs = derive_arcs_by_tangency(nodes, options.contact_alpha, options.tangency_epsilon);

    return PoreNetwork(std::move(nodes), std::move(arcs));
}

void save_network(const PoreNetwork& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file: " + path);
    save_network(net, out);
}

void save_network(const PoreNetwork& net, std::ostream& out) {
    out << "# balls " << net.node_count() << " arcs " << net.arc_count() << "\n";
    for (const BallNode& b : net.nodes()) {
        out << "B " << b.external_id << ' ' << fmt_double(b.center.x) << ' ' << fmt_double(b.center.y)
            << ' ' << fmt_double(b.center.z) << ' ' << fmt_double(b.radius) << ' '
            << fmt_double(b.volume) << "\n";
    }
    for (const AdjacencyArc& a : net.arcs()) {
        out << "A " << net.node(a.i).external_id << ' ' << net.node(a.j).external_id << ' '
            << fmt_double(a.distance) << ' ' << fmt_double(a.contact_area) << "\n";
    }
}

} // namespace poresim
