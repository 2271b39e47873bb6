#include "boolkern/data.hpp"

#include "random.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <string_view>
#include <unordered_map>

namespace boolkern {

BinaryInteractionMatrix::BinaryInteractionMatrix(std::size_t user_count,
                                                 std::vector<std::vector<Index>> rows)
    : user_count_(user_count), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const auto& r = rows_[i];
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k] >= user_count_) {
                throw std::invalid_argument("item " + std::to_string(i) + " references user " +
                                            std::to_string(r[k]) + " outside [0, " +
                                            std::to_string(user_count_) + ")");
            }
            if (k > 0 && r[k] <= r[k - 1]) {
                throw std::invalid_argument("item " + std::to_string(i) +
                                            " row is not strictly increasing");
            }
        }
        interactions_ += r.size();
    }
}

double BinaryInteractionMatrix::density() const {
    const double cells = static_cast<double>(item_count()) * static_cast<double>(user_count_);
    return cells > 0 ? static_cast<double>(interactions_) / cells : 0.0;
}

std::vector<std::vector<Index>> BinaryInteractionMatrix::user_rows() const {
    std::vector<std::vector<Index>> out(user_count_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        for (Index u : rows_[i]) out[u].push_back(static_cast<Index>(i));
    }
    return out;
}

std::vector<std::size_t> BinaryInteractionMatrix::user_degrees() const {
    std::vector<std::size_t> deg(user_count_, 0);
    for (const auto& r : rows_) {
        for (Index u : r) ++deg[u];
    }
    return deg;
}

void BinaryInteractionMatrix::set_tokens(std::vector<std::string> users,
                                         std::vector<std::string> items) {
    if ((!users.empty() && users.size() != user_count_) ||
        (!items.empty() && items.size() != rows_.size())) {
        throw std::invalid_argument("token tables do not match matrix dimensions");
    }
    user_tokens_ = std::move(users);
    item_tokens_ = std::move(items);
}

BinaryInteractionMatrix from_pairs(std::size_t user_count, std::size_t item_count,
                                   std::span<const std::pair<Index, Index>> pairs) {
    std::vector<std::vector<Index>> rows(item_count);
    for (const auto& [u, i] : pairs) {
        if (i >= item_count) throw std::invalid_argument("item index out of range");
        rows[i].push_back(u);
    }
    for (auto& r : rows) {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
    }
    return BinaryInteractionMatrix(user_count, std::move(rows));
}

// ---------------------------------------------------------------------------
// Loading

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

InputFormat parse_input_format(std::string_view name) {
    if (name == "auto") return InputFormat::Auto;
    if (name == "tsv" || name == "triples_tsv") return InputFormat::Tsv;
    if (name == "csv" || name == "triples_csv") return InputFormat::Csv;
    if (name == "whitespace" || name == "space") return InputFormat::Whitespace;
    if (name == "double_colon" || name == "movielens") return InputFormat::DoubleColon;
    throw std::invalid_argument("unknown input format '" + std::string(name) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

InputFormat detect_format(std::string_view line) {
    if (line.find("::") != std::string_view::npos) return InputFormat::DoubleColon;
    if (line.find('\t') != std::string_view::npos) return InputFormat::Tsv;
    if (line.find(',') != std::string_view::npos) return InputFormat::Csv;
    return InputFormat::Whitespace;
}

std::vector<std::string_view> split_fields(std::string_view line, InputFormat format) {
    std::vector<std::string_view> fields;
    if (format == InputFormat::Whitespace) {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
            std::size_t j = i;
            while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
            if (j > i) fields.push_back(line.substr(i, j - i));
            i = j;
        }
        return fields;
    }
    const std::string_view sep = format == InputFormat::DoubleColon ? "::"
                                 : format == InputFormat::Tsv       ? "\t"
                                                                    : ",";
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(sep, start);
        fields.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + sep.size();
    }
    return fields;
}

bool parse_number(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc() && ptr == end;
}

class TokenIndex {
public:
    Index get(std::string_view token) {
        auto [it, inserted] = ids_.try_emplace(std::string(token), static_cast<Index>(tokens_.size()));
        if (inserted) tokens_.emplace_back(token);
        return it->second;
    }
    std::size_t size() const { return tokens_.size(); }
    std::vector<std::string> take() { return std::move(tokens_); }

private:
    std::unordered_map<std::string, Index> ids_;
    std::vector<std::string> tokens_;
};

}  // namespace

BinaryInteractionMatrix parse_interactions(std::istream& in, const LoadOptions& options) {
    TokenIndex users;
    TokenIndex items;
    std::vector<std::pair<Index, Index>> pairs;
    InputFormat format = options.format;
    bool first_data_line = true;
    std::string raw;
    std::size_t line_no = 0;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (format == InputFormat::Auto) format = detect_format(line);

        const auto fields = split_fields(line, format);
        if (fields.size() < 2 || fields[0].empty() || fields[1].empty()) {
            throw ParseError(line_no, "expected at least user and item fields");
        }
        double value = 1.0;
        const bool has_value = fields.size() >= 3;
        const bool numeric = has_value ? parse_number(fields[2], value) : parse_number(fields[0], value);
        if (first_data_line) {
            first_data_line = false;
            if (!numeric) continue;  // header
        }
        if (has_value && !numeric) {
            throw ParseError(line_no, "non-numeric value '" + std::string(fields[2]) + "'");
        }
        if (!has_value) value = 1.0;

        const Index u = users.get(fields[0]);
        const Index i = items.get(fields[1]);
        if (options.binarize == Binarize::Any || value > 0.0) pairs.emplace_back(u, i);
    }
    if (pairs.empty()) throw ParseError(line_no, "no interactions found (empty input)");

    auto matrix = from_pairs(users.size(), items.size(), pairs);
    matrix.set_tokens(users.take(), items.take());
    return matrix;
}

BinaryInteractionMatrix load_interactions(const std::filesystem::path& path,
                                          const LoadOptions& options) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open interactions file '" + path.string() + "'");
    try {
        return parse_interactions(in, options);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path.string() + ": " + e.what());
    }
}

BinaryInteractionMatrix filter_max_ratings(const BinaryInteractionMatrix& x, std::size_t cap) {
    if (cap == 0) throw std::invalid_argument("filter_max_ratings: cap must be at least 1");
    const auto degrees = x.user_degrees();
    constexpr Index kDropped = static_cast<Index>(-1);
    std::vector<Index> remap(x.user_count(), kDropped);
    std::vector<std::string> kept_tokens;
    Index next = 0;
    for (std::size_t u = 0; u < x.user_count(); ++u) {
        if (degrees[u] > cap) continue;
        remap[u] = next++;
        if (!x.user_tokens().empty()) kept_tokens.push_back(x.user_tokens()[u]);
    }
    std::vector<std::vector<Index>> rows(x.item_count());
    for (std::size_t i = 0; i < x.item_count(); ++i) {
        for (Index u : x.row(i)) {
            if (remap[u] != kDropped) rows[i].push_back(remap[u]);
        }
    }
    BinaryInteractionMatrix out(next, std::move(rows));
    if (!x.user_tokens().empty() || !x.item_tokens().empty()) {
        out.set_tokens(std::move(kept_tokens), x.item_tokens());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Folds

std::size_t Fold::test_interaction_count() const {
    std::size_t total = 0;
    for (const auto& t : test_items) total += t.size();
    return total;
}

FoldPlan::FoldPlan(const BinaryInteractionMatrix& x, std::uint64_t seed, const FoldOptions& options)
    : item_count_(x.item_count()),
      user_tokens_(x.user_tokens()),
      item_tokens_(x.item_tokens()),
      options_(options),
      seed_(seed) {
    if (x.interaction_count() == 0) throw std::invalid_argument("make_folds: empty interaction matrix");
    if (options.fold_count < 2) throw std::invalid_argument("make_folds: need at least 2 folds");

    const std::size_t users = x.user_count();
    std::mt19937_64 rng(seed);

    std::vector<Index> order(users);
    std::iota(order.begin(), order.end(), Index{0});
    detail::shuffle(std::span<Index>(order), rng);
    group_.assign(users, 0);
    for (std::size_t pos = 0; pos < users; ++pos) {
        group_[order[pos]] = pos * options_.fold_count / users;
    }

    shuffled_ = x.user_rows();
    train_size_.assign(users, 0);
    eligible_.assign(users, 0);
    for (std::size_t u = 0; u < users; ++u) {
        auto& items = shuffled_[u];
        detail::shuffle(std::span<Index>(items), rng);
        const std::size_t half = train_half(items.size());
        const bool candidate = half >= options_.min_train && half < items.size();
        eligible_[u] = candidate ? 1 : 0;
        train_size_[u] = candidate ? half : items.size();
    }
}

Fold FoldPlan::fold(std::size_t t) const {
    if (t >= options_.fold_count) throw std::out_of_range("fold index out of range");
    const std::size_t users = shuffled_.size();
    std::vector<std::pair<Index, Index>> train_pairs;
    Fold out;
    out.test_items.resize(users);
    for (std::size_t u = 0; u < users; ++u) {
        const auto& items = shuffled_[u];
        const bool tested = eligible_[u] && group_[u] == t;
        const std::size_t cut = tested ? train_size_[u] : items.size();
        for (std::size_t k = 0; k < cut; ++k) train_pairs.emplace_back(static_cast<Index>(u), items[k]);
        if (tested) {
            auto& test = out.test_items[u];
            test.assign(items.begin() + static_cast<std::ptrdiff_t>(cut), items.end());
            std::sort(test.begin(), test.end());
            out.test_users.push_back(static_cast<Index>(u));
        }
    }
    out.train = from_pairs(users, item_count_, train_pairs);
    return out;
}

void FoldPlan::write_manifest(std::ostream& out) const {
    out << "fold,user,item,split\n";
    auto user_name = [&](std::size_t u) {
        return user_tokens_.empty() ? std::to_string(u) : user_tokens_[u];
    };
    auto item_name = [&](Index i) {
        return item_tokens_.empty() ? std::to_string(i) : item_tokens_[i];
    };
    for (std::size_t t = 0; t < options_.fold_count; ++t) {
        for (std::size_t u = 0; u < shuffled_.size(); ++u) {
            const bool tested = eligible_[u] && group_[u] == t;
            const auto& items = shuffled_[u];
            for (std::size_t k = 0; k < items.size(); ++k) {
                const bool is_test = tested && k >= train_size_[u];
                out << t << ',' << user_name(u) << ',' << item_name(items[k]) << ','
                    << (is_test ? "test" : "train") << '\n';
            }
        }
    }
}

FoldPlan make_folds(const BinaryInteractionMatrix& x, std::uint64_t seed, const FoldOptions& options) {
    return FoldPlan(x, seed, options);
}

}  // namespace boolkern
