#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ssfm/model.hpp"

namespace ssfm {

namespace {

struct Line {
    std::size_t number;
    std::string text;
};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

// Non-blank lines with comments stripped.
std::vector<Line> content_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t number = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++number;
        if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        raw = trim(raw);
        if (!raw.empty()) out.push_back({number, std::string(raw)});
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

std::vector<std::string> tokens(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string t; in >> t;) out.push_back(std::move(t));
    return out;
}

struct ListLine {
    std::size_t line;
    std::string owner;
    std::vector<std::string> entries;
};

}  // namespace

Market parse_market(std::string_view text, std::vector<std::string>* warnings) {
    std::optional<std::pair<std::size_t, std::vector<std::string>>> firms;
    std::optional<std::pair<std::size_t, std::vector<std::string>>> workers;
    std::vector<std::pair<std::size_t, std::string>> quota_items;
    std::vector<ListLine> firm_lines;
    std::vector<ListLine> worker_lines;

    for (const auto& [number, body] : content_lines(text)) {
        const auto colon = body.find(':');
        if (colon == std::string::npos) throw ParseError(number, "expected '<keyword>: ...'");
        const auto head = tokens(std::string_view(body).substr(0, colon));
        const auto rest = tokens(std::string_view(body).substr(colon + 1));
        if (head.size() == 1 && head[0] == "firms") {
            if (firms) throw ParseError(number, "'firms:' declared twice");
            firms.emplace(number, rest);
        } else if (head.size() == 1 && head[0] == "workers") {
            if (workers) throw ParseError(number, "'workers:' declared twice");
            workers.emplace(number, rest);
        } else if (head.size() == 1 && head[0] == "quota") {
            for (const auto& item : rest) quota_items.emplace_back(number, item);
        } else if (head.size() == 2 && head[0] == "firm") {
            firm_lines.push_back({number, head[1], rest});
        } else if (head.size() == 2 && head[0] == "worker") {
            worker_lines.push_back({number, head[1], rest});
        } else {
            throw ParseError(number, "unrecognised line '" + body + "'");
        }
    }
    if (!firms) throw ParseError(0, "missing 'firms:' line");
    if (!workers) throw ParseError(0, "missing 'workers:' line");

    auto index_names = [](const std::pair<std::size_t, std::vector<std::string>>& decl, const char* kind) {
        std::map<std::string, std::size_t> index;
        for (const auto& name : decl.second) {
            if (!index.emplace(name, index.size()).second) {
                throw ParseError(decl.first, std::string("duplicate ") + kind + " id '" + name + "'");
            }
        }
        return index;
    };
    const auto firm_index = index_names(*firms, "firm");
    const auto worker_index = index_names(*workers, "worker");
    const std::size_t nf = firm_index.size();

    std::vector<std::size_t> quotas(nf, 0);
    for (const auto& [number, item] : quota_items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw ParseError(number, "quota entry '" + item + "' is not '<firm>=<n>'");
        const std::string name = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        auto it = firm_index.find(name);
        if (it == firm_index.end()) throw ParseError(number, "quota for unknown firm '" + name + "'");
        if (quotas[it->second] != 0) throw ParseError(number, "quota for firm '" + name + "' given twice");
        long long q = 0;
        try {
            std::size_t used = 0;
            q = std::stoll(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ParseError(number, "quota '" + value + "' is not an integer");
        }
        if (q < 1) throw ParseError(number, "quota of firm '" + name + "' must be at least 1");
        quotas[it->second] = static_cast<std::size_t>(q);
    }
    for (const auto& [name, f] : firm_index) {
        if (quotas[f] == 0) throw ParseError(0, "no quota declared for firm '" + name + "'");
    }

    auto read_lists = [](const std::vector<ListLine>& lines, const std::map<std::string, std::size_t>& owners,
                         const std::map<std::string, std::size_t>& targets, const char* owner_kind,
                         const char* target_kind) {
        std::vector<std::vector<std::size_t>> lists(owners.size());
        std::vector<bool> defined(owners.size(), false);
        for (const auto& ll : lines) {
            auto o = owners.find(ll.owner);
            if (o == owners.end()) {
                throw ParseError(ll.line, std::string("unknown ") + owner_kind + " '" + ll.owner + "'");
            }
            if (defined[o->second]) {
                throw ParseError(ll.line, std::string("preferences of ") + owner_kind + " '" + ll.owner +
                                              "' given twice");
            }
            defined[o->second] = true;
            std::vector<bool> seen(targets.size(), false);
            for (const auto& name : ll.entries) {
                auto t = targets.find(name);
                if (t == targets.end()) {
                    throw ParseError(ll.line, std::string("unknown ") + target_kind + " '" + name + "'");
                }
                if (seen[t->second]) {
                    throw ParseError(ll.line, std::string(target_kind) + " '" + name + "' listed twice");
                }
                seen[t->second] = true;
                lists[o->second].push_back(t->second);
            }
        }
        return lists;
    };
    auto firm_prefs = read_lists(firm_lines, firm_index, worker_index, "firm", "worker");
    auto worker_prefs = read_lists(worker_lines, worker_index, firm_index, "worker", "firm");

    return Market::create(firms->second, workers->second, std::move(quotas), std::move(firm_prefs),
                          std::move(worker_prefs), warnings);
}

std::string serialize_market(const Market& m) {
    std::ostringstream out;
    out << "firms:";
    for (FirmIndex f = 0; f < m.num_firms(); ++f) out << ' ' << m.firm_name(f);
    out << "\nworkers:";
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) out << ' ' << m.worker_name(w);
    out << "\nquota:";
    for (FirmIndex f = 0; f < m.num_firms(); ++f) out << ' ' << m.firm_name(f) << '=' << m.quota(f);
    out << '\n';
    for (FirmIndex f = 0; f < m.num_firms(); ++f) {
        out << "firm " << m.firm_name(f) << ':';
        for (WorkerIndex w : m.firm_prefs(f)) out << ' ' << m.worker_name(w);
        out << '\n';
    }
    for (WorkerIndex w = 0; w < m.num_workers(); ++w) {
        out << "worker " << m.worker_name(w) << ':';
        for (FirmIndex f : m.worker_prefs(w)) out << ' ' << m.firm_name(f);
        out << '\n';
    }
    return out.str();
}

FractionalMatching parse_fractional(const Market& m, std::string_view text) {
    const auto lines = content_lines(text);
    if (lines.size() != m.num_firms()) {
        throw ParseError(lines.empty() ? 0 : lines.back().number,
                         "expected " + std::to_string(m.num_firms()) + " rows, found " +
                             std::to_string(lines.size()));
    }
    FractionalMatching x(m.num_firms(), m.num_workers());
    for (FirmIndex f = 0; f < lines.size(); ++f) {
        const auto row = tokens(lines[f].text);
        if (row.size() != m.num_workers()) {
            throw ParseError(lines[f].number, "expected " + std::to_string(m.num_workers()) + " entries, found " +
                                                  std::to_string(row.size()));
        }
        for (WorkerIndex w = 0; w < row.size(); ++w) {
            Rational v;
            try {
                v = Rational::parse(row[w]);
            } catch (const std::exception& e) {
                throw ParseError(lines[f].number, e.what());
            }
            if (v.sign() < 0) {
                throw ParseError(lines[f].number, "negative entry " + v.str() + " at (" + m.firm_name(f) + "," +
                                                      m.worker_name(w) + ")");
            }
            if (!v.is_zero() && !m.acceptable(f, w)) {
                throw ParseError(lines[f].number, "nonzero entry at unacceptable pair (" + m.firm_name(f) + "," +
                                                      m.worker_name(w) + ")");
            }
            x.at(f, w) = std::move(v);
        }
    }
    return x;
}

std::string serialize_fractional(const FractionalMatching& x) {
    std::string out;
    for (FirmIndex f = 0; f < x.num_firms(); ++f) {
        for (WorkerIndex w = 0; w < x.num_workers(); ++w) {
            if (w > 0) out += ' ';
            out += x.at(f, w).str();
        }
        out += '\n';
    }
    return out;
}

std::string to_string(const Market& m, const Matching& mu) {
    std::string out = "{";
    for (FirmIndex f = 0; f < mu.num_firms(); ++f) {
        if (f > 0) out += ", ";
        out += m.firm_name(f) + ":{";
        bool first = true;
        for (WorkerIndex w : mu.workers_of(f)) {
            if (!first) out += ',';
            first = false;
            out += m.worker_name(w);
        }
        out += '}';
    }
    return out + "}";
}

}  // namespace ssfm
