#include "rmdp/imdp_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include <zlib.h>

namespace rmdp {

namespace {

bool is_gzip(const std::filesystem::path& p) { return p.extension() == ".gz"; }

void append_double(std::string& out, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void append_int(std::string& out, long long v) {
    char buf[24];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

std::string read_all(const std::filesystem::path& path) {
    std::string data;
    if (is_gzip(path)) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (f == nullptr) throw ParseError("cannot open '" + path.string() + "'");
        char buf[1 << 16];
        int got = 0;
        while ((got = gzread(f, buf, sizeof(buf))) > 0) data.append(buf, static_cast<std::size_t>(got));
        const bool failed = got < 0;
        gzclose(f);
        if (failed) throw ParseError("'" + path.string() + "': corrupt gzip stream");
        return data;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_all(const std::filesystem::path& path, const std::string& data) {
    if (is_gzip(path)) {
        gzFile f = gzopen(path.c_str(), "wb");
        if (f == nullptr) throw std::runtime_error("cannot write '" + path.string() + "'");
        std::size_t off = 0;
        while (off < data.size()) {
            const auto n = static_cast<unsigned>(std::min<std::size_t>(data.size() - off, 1u << 30));
            if (gzwrite(f, data.data() + off, n) != static_cast<int>(n)) {
                gzclose(f);
                throw std::runtime_error("gzip write failed for '" + path.string() + "'");
            }
            off += n;
        }
        gzclose(f);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based
};

class LineParser {
public:
    LineParser(std::string source, std::size_t line, std::vector<Token> tokens)
        : source_(std::move(source)), line_(line), tokens_(std::move(tokens)) {}

    [[noreturn]] void fail(std::size_t tok, const std::string& what) const {
        const std::size_t col = tok < tokens_.size() ? tokens_[tok].column : (tokens_.empty() ? 1 : tokens_.back().column);
        throw ParseError(source_ + ":" + std::to_string(line_) + ":" + std::to_string(col) + ": " + what);
    }

    void expect_count(std::size_t n) const {
        if (tokens_.size() != n)
            fail(std::min(tokens_.size(), n), "expected " + std::to_string(n) + " fields, got " +
                                                  std::to_string(tokens_.size()));
    }

    long long integer(std::size_t i) const {
        long long v = 0;
        const auto& t = tokens_.at(i).text;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size()) fail(i, "expected an integer, got '" + std::string(t) + "'");
        return v;
    }

    double real(std::size_t i) const {
        double v = 0;
        const auto& t = tokens_.at(i).text;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
        if (res.ec != std::errc() || res.ptr != t.data() + t.size()) fail(i, "expected a number, got '" + std::string(t) + "'");
        return v;
    }

    [[nodiscard]] const std::vector<Token>& tokens() const { return tokens_; }

private:
    std::string source_;
    std::size_t line_;
    std::vector<Token> tokens_;
};

struct RawTransition {
    long long state;
    long long action;
    IntervalEntry entry;
    std::size_t line;
};

}  // namespace

std::string to_explicit_string(const IntervalMDP& m) {
    std::string out;
    out.reserve(64 + m.num_transitions() * 40);
    out += "imdp ";
    append_int(out, m.num_states());
    for (const auto& a : m.alphabet) out += ' ' + a;
    out += "\ninit ";
    append_int(out, m.initial);
    out += '\n';
    if (m.sink >= 0) {
        out += "sink ";
        append_int(out, m.sink);
        out += '\n';
    }
    for (int s = 0; s < m.num_states(); ++s) {
        if (m.labels[s].empty()) continue;
        out += "label ";
        append_int(out, s);
        for (std::size_t l = 0; l < m.alphabet.size(); ++l)
            if (m.labels[s].has(static_cast<int>(l))) out += ' ' + m.alphabet[l];
        out += '\n';
    }
    for (int s = 0; s < m.num_states(); ++s)
        for (int a = 0; a < m.num_actions(s); ++a)
            for (const auto& e : m.row(s, a)) {
                out += "t ";
                append_int(out, s);
                out += ' ';
                append_int(out, a);
                out += ' ';
                append_int(out, e.succ);
                out += ' ';
                append_double(out, e.lo);
                out += ' ';
                append_double(out, e.hi);
                out += '\n';
            }
    return out;
}

IntervalMDP parse_explicit(std::string_view text, const std::string& source) {
    IntervalMDP m;
    long long n = -1;
    bool have_init = false;
    std::unordered_map<std::string, int> label_index;
    std::vector<RawTransition> raw;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;

        std::vector<Token> tokens;
        for (std::size_t i = 0; i < line.size();) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
            if (i >= line.size()) break;
            const std::size_t b = i;
            while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
            tokens.push_back({line.substr(b, i - b), b + 1});
        }
        if (tokens.empty() || tokens.front().text.front() == '#') continue;
        LineParser p(source, line_no, tokens);
        const auto kw = tokens.front().text;

        if (kw == "imdp") {
            if (n >= 0) p.fail(0, "duplicate header");
            if (tokens.size() < 2) p.fail(1, "header needs a state count");
            n = p.integer(1);
            if (n <= 0) p.fail(1, "state count must be positive");
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                std::string name(tokens[i].text);
                if (!label_index.emplace(name, static_cast<int>(m.alphabet.size())).second)
                    p.fail(i, "duplicate label '" + name + "'");
                m.alphabet.push_back(std::move(name));
            }
            if (m.alphabet.size() > kMaxLabels) p.fail(2, "alphabet exceeds 64 labels");
            m.labels.assign(static_cast<std::size_t>(n), LabelSet{});
            continue;
        }
        if (n < 0) p.fail(0, "expected 'imdp' header before '" + std::string(kw) + "'");
        const auto state_at = [&](std::size_t i) {
            const long long s = p.integer(i);
            if (s < 0 || s >= n) p.fail(i, "state " + std::to_string(s) + " out of range");
            return s;
        };
        if (kw == "init") {
            p.expect_count(2);
            m.initial = static_cast<int>(state_at(1));
            have_init = true;
        } else if (kw == "sink") {
            p.expect_count(2);
            m.sink = static_cast<int>(state_at(1));
        } else if (kw == "label") {
            if (tokens.size() < 2) p.fail(1, "label line needs a state");
            const auto s = state_at(1);
            for (std::size_t i = 2; i < tokens.size(); ++i) {
                const auto it = label_index.find(std::string(tokens[i].text));
                if (it == label_index.end()) p.fail(i, "unknown label '" + std::string(tokens[i].text) + "'");
                m.labels[static_cast<std::size_t>(s)].insert(it->second);
            }
        } else if (kw == "t") {
            p.expect_count(6);
            const auto s = state_at(1);
            const auto a = p.integer(2);
            if (a < 0) p.fail(2, "negative action id");
            const auto succ = state_at(3);
            const double lo = p.real(4);
            const double hi = p.real(5);
            const std::string row = "row (" + std::to_string(s) + "," + std::to_string(a) + ")";
            if (!(lo >= 0.0)) p.fail(4, row + ": lo < 0");
            if (!(hi <= 1.0)) p.fail(5, row + ": hi > 1");
            if (hi < lo) p.fail(5, row + ": hi < lo");
            raw.push_back({s, a, {static_cast<std::int32_t>(succ), lo, hi}, line_no});
        } else {
            p.fail(0, "unknown record '" + std::string(kw) + "'");
        }
    }
    if (n < 0) throw ParseError(source + ": missing 'imdp' header");
    if (!have_init) throw ParseError(source + ": missing 'init' line");

    std::stable_sort(raw.begin(), raw.end(), [](const RawTransition& x, const RawTransition& y) {
        return x.state != y.state ? x.state < y.state : x.action < y.action;
    });
    std::size_t i = 0;
    std::vector<IntervalEntry> row;
    for (long long s = 0; s < n; ++s) {
        m.state_rows.push_back(m.state_rows.back());
        long long expected_action = 0;
        while (i < raw.size() && raw[i].state == s) {
            if (raw[i].action != expected_action)
                throw ParseError(source + ":" + std::to_string(raw[i].line) + ": state " + std::to_string(s) +
                                 " skips action " + std::to_string(expected_action));
            row.clear();
            const long long a = raw[i].action;
            while (i < raw.size() && raw[i].state == s && raw[i].action == a) row.push_back(raw[i++].entry);
            m.add_row(row);
            ++expected_action;
        }
        if (expected_action == 0) throw ParseError(source + ": state " + std::to_string(s) + " has no transitions");
    }
    return m;
}

void export_explicit(const IntervalMDP& m, const std::filesystem::path& path) { write_all(path, to_explicit_string(m)); }

IntervalMDP import_explicit(const std::filesystem::path& path) { return parse_explicit(read_all(path), path.string()); }

}  // namespace rmdp
