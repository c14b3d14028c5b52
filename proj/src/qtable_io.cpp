#include <cmath>
#include <string>
#include <vector>

#include "mapdes/agents.hpp"
#include "mapdes/io_util.hpp"

namespace mapdes {

namespace {

constexpr std::string_view kMagic = "MAPDES-QTABLE v1";

void append_edge_line(std::string& out, std::string_view key,
                      std::span<const double> edges) {
    out += key;
    for (double e : edges) {
        out += ',';
        out += format_double(e);
    }
    out += '\n';
}

void append_kv(std::string& out, std::string_view key, const std::string& value) {
    out += key;
    out += ',';
    out += value;
    out += '\n';
}

class LineReader {
public:
    explicit LineReader(std::string_view text) : lines_(split(text, '\n')) {
        while (!lines_.empty() && trim(lines_.back()).empty()) lines_.pop_back();
    }

    bool done() const { return pos_ >= lines_.size(); }

    std::string_view next() {
        if (done()) throw Error(Errc::io_failure, "q-table file truncated");
        return lines_[pos_++];
    }

private:
    std::vector<std::string_view> lines_;
    std::size_t pos_ = 0;
};

std::vector<std::string_view> expect_key(LineReader& reader, std::string_view key,
                                         std::size_t n_values) {
    auto fields = split(reader.next(), ',');
    if (fields.empty() || fields[0] != key)
        throw Error(Errc::format_version_mismatch,
                    "expected '" + std::string(key) + "' line in q-table file");
    if (fields.size() != n_values + 1)
        throw Error(Errc::format_version_mismatch,
                    "bad field count on '" + std::string(key) + "' line");
    return fields;
}

double parse_field(std::string_view token, std::string_view what) {
    double v = 0.0;
    if (!parse_double(token, v))
        throw Error(Errc::format_version_mismatch,
                    "bad number in q-table " + std::string(what) + ": '" + std::string(token) +
                        "'");
    return v;
}

} // namespace

void save_qtable(const QTable& q, const std::filesystem::path& path) {
    std::string out;
    out.reserve(q.values.size() * 12 + 512);
    out += kMagic;
    out += '\n';
    append_edge_line(out, "load_edges", q.discretizer.load_edges);
    append_edge_line(out, "gen_edges", q.discretizer.gen_edges);
    append_kv(out, "soc_bins", format_int(Discretizer::kSocBins));
    append_kv(out, "hours", format_int(Discretizer::kHourBins));
    append_kv(out, "actions", format_int(kActionCount));
    append_kv(out, "alpha", format_double(q.hp.alpha));
    append_kv(out, "gamma", format_double(q.hp.gamma));
    append_kv(out, "epsilon_start", format_double(q.hp.epsilon_start));
    append_kv(out, "epsilon_decay", format_double(q.hp.epsilon_decay));
    append_kv(out, "epsilon_min", format_double(q.hp.epsilon_min));
    append_kv(out, "episodes", format_int(q.hp.episodes));
    append_kv(out, "invalid_penalty", format_double(q.hp.invalid_penalty));
    append_kv(out, "peak_weight", format_double(q.hp.peak_weight));
    append_kv(out, "states", format_int(Discretizer::state_count()));
    for (int s = 0; s < Discretizer::state_count(); ++s) {
        out += format_int(s);
        for (double v : q.row(s)) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    write_text_file_atomic(path, out);
}

QTable load_qtable(const std::filesystem::path& path) {
    std::string text = read_text_file(path);
    LineReader reader(text);

    if (trim(reader.next()) != kMagic)
        throw Error(Errc::format_version_mismatch, "not a '" + std::string(kMagic) + "' file");

    QTable q;
    auto load_fields = expect_key(reader, "load_edges", Discretizer::kValueBins - 1);
    auto gen_fields = expect_key(reader, "gen_edges", Discretizer::kValueBins - 1);
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(Discretizer::kValueBins); ++i) {
        q.discretizer.load_edges[i] = parse_field(load_fields[i + 1], "load_edges");
        q.discretizer.gen_edges[i] = parse_field(gen_fields[i + 1], "gen_edges");
    }

    auto scalar_field = [&](std::string_view key) {
        auto fields = expect_key(reader, key, 1);
        return parse_field(fields[1], key);
    };
    if (static_cast<int>(scalar_field("soc_bins")) != Discretizer::kSocBins)
        throw Error(Errc::dimension_mismatch, "soc_bins does not match this build");
    if (static_cast<int>(scalar_field("hours")) != Discretizer::kHourBins)
        throw Error(Errc::dimension_mismatch, "hours does not match this build");
    if (static_cast<int>(scalar_field("actions")) != kActionCount)
        throw Error(Errc::dimension_mismatch, "actions does not match this build");

    q.hp.alpha = scalar_field("alpha");
    q.hp.gamma = scalar_field("gamma");
    q.hp.epsilon_start = scalar_field("epsilon_start");
    q.hp.epsilon_decay = scalar_field("epsilon_decay");
    q.hp.epsilon_min = scalar_field("epsilon_min");
    q.hp.episodes = static_cast<long long>(scalar_field("episodes"));
    q.hp.invalid_penalty = scalar_field("invalid_penalty");
    q.hp.peak_weight = scalar_field("peak_weight");

    if (static_cast<int>(scalar_field("states")) != Discretizer::state_count())
        throw Error(Errc::dimension_mismatch, "state count does not match this build");

    q.discretizer.validate();
    q.values.assign(static_cast<std::size_t>(Discretizer::state_count()) * kActionCount, 0.0);
    for (int s = 0; s < Discretizer::state_count(); ++s) {
        auto fields = split(reader.next(), ',');
        if (fields.size() != 1 + kActionCount)
            throw Error(Errc::format_version_mismatch, "bad q-table row width");
        if (static_cast<int>(parse_field(fields[0], "state index")) != s)
            throw Error(Errc::format_version_mismatch, "q-table rows out of order");
        for (int a = 0; a < kActionCount; ++a)
            q.row(s)[static_cast<std::size_t>(a)] = parse_field(fields[1 + a], "q value");
    }
    return q;
}

} // namespace mapdes
