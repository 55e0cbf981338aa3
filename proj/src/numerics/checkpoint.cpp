#include "gazeaes/numerics/checkpoint.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace gazeaes::numerics {

template <typename T>
Checkpoint make_checkpoint(const ParameterSet<T>& params, std::map<std::string, std::string> metadata) {
    Checkpoint ck;
    ck.precision_bits = sizeof(T) == sizeof(float) ? 32 : 64;
    ck.metadata = std::move(metadata);
    params.for_each([&](const std::string& name, const Tensor<T>& t) {
        Checkpoint::Entry e;
        e.shape = t.shape();
        e.values.assign(t.data().begin(), t.data().end());
        ck.order.push_back(name);
        ck.entries[name] = std::move(e);
    });
    return ck;
}

template <typename T>
void apply_checkpoint(const Checkpoint& checkpoint, ParameterSet<T>& params) {
    if (checkpoint.entries.size() != params.size()) {
        throw CheckpointError("checkpoint holds " + std::to_string(checkpoint.entries.size()) +
                              " parameters, model expects " + std::to_string(params.size()));
    }
    params.for_each([&](const std::string& name, Tensor<T>& t) {
        auto it = checkpoint.entries.find(name);
        if (it == checkpoint.entries.end()) throw CheckpointError("checkpoint is missing parameter '" + name + "'");
        if (it->second.shape != t.shape()) {
            throw CheckpointError("checkpoint shape " + shape_to_string(it->second.shape) + " for '" + name +
                                  "' does not match model shape " + shape_to_string(t.shape()));
        }
        auto dst = t.mutable_data();
        for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = static_cast<T>(it->second.values[i]);
    });
}

void write_checkpoint(std::ostream& out, const Checkpoint& ck) {
    out << "gazeaes-checkpoint " << ck.version << '\n';
    out << "precision " << ck.precision_bits << '\n';
    for (const auto& [k, v] : ck.metadata) out << "meta " << k << ' ' << v << '\n';
    out << "parameters " << ck.order.size() << '\n';
    out << std::hexfloat;
    for (const auto& name : ck.order) {
        const auto& e = ck.entries.at(name);
        out << "param " << name << ' ' << e.shape.size();
        for (auto d : e.shape) out << ' ' << std::dec << d;
        out << '\n' << std::hexfloat;
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            if (i) out << ' ';
            out << e.values[i];
        }
        out << '\n';
    }
    out << std::defaultfloat << "end\n";
}

namespace {

std::string expect_line(std::istream& in, const char* what) {
    std::string line;
    if (!std::getline(in, line)) throw CheckpointError(std::string("checkpoint truncated: expected ") + what);
    return line;
}

}  // namespace

Checkpoint read_checkpoint(std::istream& in) {
    Checkpoint ck;
    {
        std::istringstream header(expect_line(in, "header"));
        std::string magic;
        header >> magic >> ck.version;
        if (magic != "gazeaes-checkpoint") throw CheckpointError("not a gazeaes checkpoint");
        if (ck.version != Checkpoint::kVersion) {
            throw CheckpointError("unsupported checkpoint version " + std::to_string(ck.version));
        }
    }
    {
        std::istringstream line(expect_line(in, "precision"));
        std::string key;
        line >> key >> ck.precision_bits;
        if (key != "precision" || (ck.precision_bits != 32 && ck.precision_bits != 64)) {
            throw CheckpointError("bad precision line");
        }
    }
    std::size_t count = 0;
    for (;;) {
        std::string raw = expect_line(in, "parameters");
        std::istringstream line(raw);
        std::string key;
        line >> key;
        if (key == "meta") {
            std::string k, v;
            line >> k;
            std::getline(line >> std::ws, v);
            ck.metadata[k] = v;
        } else if (key == "parameters") {
            line >> count;
            break;
        } else {
            throw CheckpointError("unexpected line: " + raw);
        }
    }
    for (std::size_t p = 0; p < count; ++p) {
        std::istringstream header(expect_line(in, "param header"));
        std::string key, name;
        std::size_t rank = 0;
        header >> key >> name >> rank;
        if (key != "param" || name.empty()) throw CheckpointError("bad parameter header");
        Checkpoint::Entry e;
        e.shape.resize(rank);
        for (auto& d : e.shape) {
            if (!(header >> d) || d == 0) throw CheckpointError("bad shape for parameter '" + name + "'");
        }
        const std::size_t n = element_count(e.shape);
        const std::string values = expect_line(in, "parameter values");
        const char* cursor = values.c_str();
        e.values.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            char* next = nullptr;
            const double v = std::strtod(cursor, &next);
            if (next == cursor) throw CheckpointError("parameter '" + name + "' has too few values");
            e.values.push_back(v);
            cursor = next;
        }
        while (*cursor == ' ') ++cursor;
        if (*cursor != '\0') throw CheckpointError("parameter '" + name + "' has too many values");
        ck.order.push_back(name);
        ck.entries[name] = std::move(e);
    }
    if (expect_line(in, "end") != "end") throw CheckpointError("missing end marker");
    return ck;
}

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint) {
    std::ofstream out(path);
    if (!out) throw CheckpointError("cannot write checkpoint " + path.string());
    write_checkpoint(out, checkpoint);
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot read checkpoint " + path.string());
    return read_checkpoint(in);
}

template Checkpoint make_checkpoint<float>(const ParameterSet<float>&, std::map<std::string, std::string>);
template Checkpoint make_checkpoint<double>(const ParameterSet<double>&, std::map<std::string, std::string>);
template void apply_checkpoint<float>(const Checkpoint&, ParameterSet<float>&);
template void apply_checkpoint<double>(const Checkpoint&, ParameterSet<double>&);

}  // namespace gazeaes::numerics
