#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace boolkern {

using Index = std::uint32_t;

/// Sparse binary items x users matrix in the item-based view: items are the
/// examples, users are the variables. Each row lists the users that
/// interacted with the item, strictly increasing.
class BinaryInteractionMatrix {
public:
    BinaryInteractionMatrix() = default;
    /// Throws std::invalid_argument when a row is unsorted, has duplicates,
    /// or references a user outside [0, user_count).
    BinaryInteractionMatrix(std::size_t user_count, std::vector<std::vector<Index>> rows);

    std::size_t item_count() const { return rows_.size(); }
    std::size_t user_count() const { return user_count_; }
    std::size_t interaction_count() const { return interactions_; }
    double density() const;

    std::span<const Index> row(std::size_t item) const { return rows_[item]; }
    const std::vector<std::vector<Index>>& rows() const { return rows_; }

    /// User-based view: per user, the sorted list of items.
    std::vector<std::vector<Index>> user_rows() const;
    std::vector<std::size_t> user_degrees() const;

    /// Original tokens from the input file; empty for matrices built in code.
    const std::vector<std::string>& user_tokens() const { return user_tokens_; }
    const std::vector<std::string>& item_tokens() const { return item_tokens_; }
    void set_tokens(std::vector<std::string> users, std::vector<std::string> items);

    friend bool operator==(const BinaryInteractionMatrix&, const BinaryInteractionMatrix&) = default;

private:
    std::size_t user_count_ = 0;
    std::size_t interactions_ = 0;
    std::vector<std::vector<Index>> rows_;
    std::vector<std::string> user_tokens_;
    std::vector<std::string> item_tokens_;
};

/// Builds a matrix from (user, item) index pairs; duplicates collapse.
BinaryInteractionMatrix from_pairs(std::size_t user_count, std::size_t item_count,
                                   std::span<const std::pair<Index, Index>> pairs);

enum class InputFormat { Auto, Tsv, Csv, Whitespace, DoubleColon };
enum class Binarize { Positive, Any };

InputFormat parse_input_format(std::string_view name);

struct LoadOptions {
    InputFormat format = InputFormat::Auto;
    /// Positive: a row is an interaction when its value is > 0.
    /// Any: every listed row is an interaction regardless of value.
    Binarize binarize = Binarize::Positive;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads (user, item[, value]) triples. Tokens map to dense indices in order
/// of first appearance; a header is skipped when the first line's value
/// field is not numeric. Rows without a value count as interactions.
BinaryInteractionMatrix parse_interactions(std::istream& in, const LoadOptions& options = {});
BinaryInteractionMatrix load_interactions(const std::filesystem::path& path,
                                          const LoadOptions& options = {});

/// Drops users with strictly more than `cap` interactions and reindexes the
/// survivors densely (original order kept). Items are kept, possibly empty.
BinaryInteractionMatrix filter_max_ratings(const BinaryInteractionMatrix& x, std::size_t cap);

struct FoldOptions {
    std::size_t fold_count = 5;
    /// A user is a test candidate only when its training half keeps at least
    /// this many interactions.
    std::size_t min_train = 5;
};

/// One train/test partition of the interactions.
struct Fold {
    BinaryInteractionMatrix train;
    /// Users with a non-empty test set, increasing.
    std::vector<Index> test_users;
    /// Per user (indexed by user id), test items, sorted; empty for non-test users.
    std::vector<std::vector<Index>> test_items;

    std::size_t test_interaction_count() const;
};

/// Reproducible k-fold plan: users are shuffled and split into fold_count
/// near-equal groups; each user's interactions are shuffled and halved
/// (training half gets the odd one out). Fold t tests the second half of
/// group t's eligible users and trains on everything else.
class FoldPlan {
public:
    FoldPlan(const BinaryInteractionMatrix& x, std::uint64_t seed, const FoldOptions& options = {});

    std::size_t fold_count() const { return options_.fold_count; }
    std::uint64_t seed() const { return seed_; }
    std::size_t user_group(Index user) const { return group_[user]; }
    bool is_test_candidate(Index user) const { return eligible_[user] != 0; }
    /// Items of `user` after the per-user shuffle; the first train_size(user)
    /// form the training half.
    std::span<const Index> shuffled_items(Index user) const { return shuffled_[user]; }
    std::size_t train_size(Index user) const { return train_size_[user]; }

    Fold fold(std::size_t t) const;

    /// Audit listing: "fold,user,item,split" with split in {train, test}.
    void write_manifest(std::ostream& out) const;

    friend bool operator==(const FoldPlan& a, const FoldPlan& b) {
        return a.seed_ == b.seed_ && a.group_ == b.group_ && a.eligible_ == b.eligible_ &&
               a.shuffled_ == b.shuffled_ && a.train_size_ == b.train_size_;
    }

private:
    std::size_t item_count_;
    std::vector<std::string> user_tokens_;
    std::vector<std::string> item_tokens_;
    FoldOptions options_;
    std::uint64_t seed_;
    std::vector<std::size_t> group_;
    std::vector<char> eligible_;
    std::vector<std::vector<Index>> shuffled_;
    std::vector<std::size_t> train_size_;
};

FoldPlan make_folds(const BinaryInteractionMatrix& x, std::uint64_t seed,
                    const FoldOptions& options = {});

/// Training share of a user's k interactions: ceil(k / 2).
constexpr std::size_t train_half(std::size_t k) { return k - k / 2; }

}  // namespace boolkern
