#include "ngrq/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "ngrq/error.hpp"

namespace ngrq {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
    const auto newline = [&](int d) {
        if (indent < 0) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += Json(it.key()).dump();
            out += indent < 0 ? ":" : ": ";
            emit(it.value(), indent, depth + 1, out);
        }
        newline(depth);
        out += '}';
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            emit(v, indent, depth + 1, out);
        }
        newline(depth);
        out += ']';
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? format_double(x) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

std::string coordinate_header(const Domain& d) {
    switch (d.kind()) {
    case DomainKind::interval: return "index,x,value\n";
    case DomainKind::rectangle: return "index,x,y,value\n";
    case DomainKind::radial: return "index,r,value\n";
    }
    return "";
}

}  // namespace

std::string to_json_text(const Json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    out += '\n';
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open " + tmp.string() + " for writing");
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error("cannot rename into " + path.string());
    }
}

std::string function_csv(const DiscreteFunction& u) {
    std::string out = coordinate_header(u.domain());
    for (std::size_t k = 0; k < u.size(); ++k) {
        out += std::to_string(k);
        for (double x : u.domain().coordinates(k)) out += ',' + format_double(x);
        out += ',' + format_double(u[k]) + '\n';
    }
    return out;
}

std::string radial_profile_csv(const DiscreteFunction& u) {
    const Domain& d = u.domain();
    if (d.kind() != DomainKind::radial) throw InvalidInput("radial profile needs a radial function");
    std::string out = "r,value\n";
    for (std::size_t k = 0; k < u.size(); ++k) out += format_double(d.coordinates(k)[0]) + ',' + format_double(u[k]) + '\n';
    out += format_double(d.extent()) + ",0\n";
    return out;
}

std::string branch_csv(const std::vector<BranchRow>& rows) {
    std::string out = "lambda,mu,energy,norm_gamma,residual,admissible,phi2\n";
    for (const auto& r : rows)
        out += format_double(r.lambda) + ',' + format_double(r.mu) + ',' + format_double(r.energy) + ',' +
               format_double(r.norm_gamma) + ',' + format_double(r.residual) + ',' + (r.admissible ? "1" : "0") + ',' +
               format_double(r.phi2) + '\n';
    return out;
}

std::string fiber_csv(const std::vector<FiberSample>& rows) {
    std::string out = "t,phi,dphi,ddphi\n";
    for (const auto& r : rows)
        out += format_double(r.t) + ',' + format_double(r.phi) + ',' + format_double(r.dphi) + ',' + format_double(r.ddphi) + '\n';
    return out;
}

}  // namespace ngrq
