#include "kslab/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kslab {

const char* const kTOOL_VERSION = "kslab 0.1.0";

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; big-endian hosts are unsupported");

namespace {

std::string fmt17(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_grid_header(std::ostream& os, const Grid& g)
{
    os << "KSLB1\n" << g.dim;
    for (int a = 0; a < g.dim; ++a) os << ' ' << g.points[std::size_t(a)];
    for (int a = 0; a < g.dim; ++a) os << ' ' << fmt17(g.extent[std::size_t(a)]);
    os << '\n';
}

Grid read_grid_header(std::istream& is, const std::string& path, Grid::Kind kind, BoundaryKind bc)
{
    std::string magic;
    if (!std::getline(is, magic) || magic != "KSLB1")
        throw IoError(path + ": not a KSLB1 snapshot");
    std::string line;
    if (!std::getline(is, line)) throw IoError(path + ": truncated snapshot header");
    std::istringstream hs(line);
    int dim = 0;
    if (!(hs >> dim) || dim < 1 || dim > 3) throw IoError(path + ": bad snapshot dim");
    std::vector<int> pts(static_cast<std::size_t>(dim));
    std::vector<double> ext(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a)
        if (!(hs >> pts[std::size_t(a)])) throw IoError(path + ": bad snapshot points");
    for (int a = 0; a < dim; ++a)
        if (!(hs >> ext[std::size_t(a)])) throw IoError(path + ": bad snapshot extent");
    if (kind == Grid::Kind::Interval) {
        if (dim != 1) throw IoError(path + ": interval snapshots are 1d");
        return Grid::interval(pts[0], ext[0], bc);
    }
    return Grid::periodic(pts, ext);
}

void write_values(std::ostream& os, const std::vector<double>& v)
{
    os.write(reinterpret_cast<const char*>(v.data()), std::streamsize(v.size() * sizeof(double)));
}

std::vector<double> read_values(std::istream& is, std::size_t n, const std::string& path)
{
    std::vector<double> v(n);
    is.read(reinterpret_cast<char*>(v.data()), std::streamsize(n * sizeof(double)));
    if (std::size_t(is.gcount()) != n * sizeof(double)) throw IoError(path + ": truncated snapshot payload");
    return v;
}

} // namespace

void save_snapshot(const Field& f, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write snapshot: " + path);
    write_grid_header(os, f.grid());
    write_values(os, f.values());
    if (!os) throw IoError("short write on snapshot: " + path);
}

Field load_snapshot(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read snapshot: " + path);
    Grid g = read_grid_header(is, path, Grid::Kind::Periodic, BoundaryKind::Navier);
    return Field(g, read_values(is, g.size(), path));
}

void save_checkpoint(const Checkpoint& c, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write checkpoint: " + path);
    char tbuf[64];
    std::snprintf(tbuf, sizeof tbuf, "%a", c.time);
    os << "KSLB1C 1\n"
       << "kind " << c.kind << "\n"
       << "step " << c.step << "\n"
       << "time " << tbuf << "\n"
       << "seed " << c.seed << "\n"
       << "m " << c.m << "\n";
    std::snprintf(tbuf, sizeof tbuf, "%a", c.e0);
    os << "e0 " << tbuf << "\n"
       << "fields " << c.fields.size() << "\n";
    for (const Field& f : c.fields) {
        const Grid& g = f.grid();
        os << "origin";
        for (int a = 0; a < g.dim; ++a) {
            std::snprintf(tbuf, sizeof tbuf, "%a", g.origin[std::size_t(a)]);
            os << ' ' << tbuf;
        }
        os << " kind " << (g.kind == Grid::Kind::Interval
                               ? (g.bc == BoundaryKind::Navier ? "navier" : "dirichlet")
                               : "periodic")
           << '\n';
        write_grid_header(os, g);
        write_values(os, f.values());
        os << '\n';
    }
    if (!os) throw IoError("short write on checkpoint: " + path);
}

Checkpoint load_checkpoint(const std::string& path, const Grid& expected_grid)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot read checkpoint: " + path);
    std::string line;
    if (!std::getline(is, line) || line != "KSLB1C 1") throw IoError(path + ": not a KSLB1C checkpoint");
    Checkpoint c;
    std::size_t nfields = 0;
    for (int i = 0; i < 7; ++i) {
        if (!std::getline(is, line)) throw IoError(path + ": truncated checkpoint header");
        std::istringstream hs(line);
        std::string tag;
        hs >> tag;
        if (tag == "kind") hs >> c.kind;
        else if (tag == "step") hs >> c.step;
        else if (tag == "time") {
            std::string hex;
            hs >> hex;
            c.time = std::strtod(hex.c_str(), nullptr);
        } else if (tag == "seed") hs >> c.seed;
        else if (tag == "m") hs >> c.m;
        else if (tag == "e0") {
            std::string hex;
            hs >> hex;
            c.e0 = std::strtod(hex.c_str(), nullptr);
        } else if (tag == "fields") hs >> nfields;
        else throw IoError(path + ": unexpected checkpoint tag '" + tag + "'");
        if (!hs) throw IoError(path + ": malformed checkpoint line '" + line + "'");
    }
    for (std::size_t f = 0; f < nfields; ++f) {
        if (!std::getline(is, line)) throw IoError(path + ": missing origin line");
        std::istringstream hs(line);
        std::string tag;
        hs >> tag;
        if (tag != "origin") throw IoError(path + ": expected origin line");
        std::vector<double> origin;
        std::string tok;
        std::string kind_word = "periodic";
        while (hs >> tok) {
            if (tok == "kind") {
                hs >> kind_word;
                break;
            }
            origin.push_back(std::strtod(tok.c_str(), nullptr));
        }
        const Grid::Kind gk = kind_word == "periodic" ? Grid::Kind::Periodic : Grid::Kind::Interval;
        const BoundaryKind bc = kind_word == "dirichlet" ? BoundaryKind::Dirichlet : BoundaryKind::Navier;
        Grid g = read_grid_header(is, path, gk, bc);
        for (std::size_t a = 0; a < origin.size() && a < 3; ++a) g.origin[a] = origin[a];
        if (!g.same_layout(expected_grid))
            throw IoError(path + ": checkpoint grid mismatch (" + g.describe() + " vs " +
                          expected_grid.describe() + ")");
        c.fields.emplace_back(g, read_values(is, g.size(), path));
        std::getline(is, line); // trailing newline after the payload
    }
    return c;
}

void write_monitor_csv(const Trajectory& traj, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write CSV: " + path);
    os << "t";
    for (const auto& name : traj.monitor_names) os << ',' << name;
    os << '\n';
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        os << fmt17(traj.times[i]);
        for (const auto& name : traj.monitor_names) os << ',' << fmt17(traj.at(name)[i]);
        os << '\n';
    }
    if (!os) throw IoError("short write on CSV: " + path);
}

void write_manifest(const RunManifest& m, const std::string& path)
{
    nlohmann::json j;
    j["digest"] = m.digest;
    j["seed"] = m.seed;
    j["tool_version"] = m.tool_version;
    j["threads"] = {{"workers", m.workers}};
    j["outputs"] = m.outputs;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write manifest: " + path);
    os << j.dump(2) << '\n';
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot write file: " + path);
    os << text;
}

} // namespace kslab
