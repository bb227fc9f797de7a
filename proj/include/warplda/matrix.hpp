#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "warplda/partition.hpp"

namespace warplda {

class TokenMatrix;

/// Mutable view of one column: a contiguous run of the entry store, ordered
/// by row id.
class ColumnView {
 public:
  std::uint32_t index() const noexcept { return index_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(end_ - begin_); }
  bool empty() const noexcept { return end_ == begin_; }

  /// Global entry offset of the i-th entry in the column store.
  std::uint64_t offset(std::uint32_t i) const noexcept { return begin_ + i; }
  std::uint32_t row_id(std::uint32_t i) const noexcept { return row_ids_[begin_ + i]; }
  std::span<std::uint32_t> data(std::uint32_t i) const noexcept { return {data_ + (begin_ + i) * width_, width_}; }

 private:
  friend class TokenMatrix;
  ColumnView(std::uint32_t index, std::uint64_t begin, std::uint64_t end, const std::uint32_t* row_ids,
             std::uint32_t* data, std::uint32_t width)
      : index_(index), begin_(begin), end_(end), row_ids_(row_ids), data_(data), width_(width) {}

  std::uint32_t index_;
  std::uint64_t begin_, end_;
  const std::uint32_t* row_ids_;
  std::uint32_t* data_;
  std::uint32_t width_;
};

/// Mutable view of one row, reached through the row index: entries are
/// references into the column store, in increasing column id.
class RowView {
 public:
  std::uint32_t index() const noexcept { return index_; }
  std::uint32_t size() const noexcept { return static_cast<std::uint32_t>(refs_.size()); }
  bool empty() const noexcept { return refs_.empty(); }

  std::uint64_t offset(std::uint32_t i) const noexcept { return refs_[i]; }
  std::span<std::uint32_t> data(std::uint32_t i) const noexcept { return {data_ + refs_[i] * width_, width_}; }
  /// Column of the i-th entry (binary search over column boundaries).
  std::uint32_t column_id(std::uint32_t i) const noexcept;

 private:
  friend class TokenMatrix;
  RowView(std::uint32_t index, std::span<const std::uint64_t> refs, std::uint32_t* data, std::uint32_t width,
          std::span<const std::uint64_t> col_begin)
      : index_(index), refs_(refs), data_(data), width_(width), col_begin_(col_begin) {}

  std::uint32_t index_;
  std::span<const std::uint64_t> refs_;
  std::uint32_t* data_;
  std::uint32_t width_;
  std::span<const std::uint64_t> col_begin_;
};

/// Per-worker partial sums merged after a sweep. This is the only sanctioned
/// way for a user function to aggregate across rows or columns.
template <class T>
class SumReducer {
 public:
  SumReducer(std::size_t size, std::uint32_t workers) : size_(size), parts_(workers, std::vector<T>(size, T{})) {}

  std::span<T> local(std::uint32_t worker) { return parts_[worker]; }

  /// Element-wise sum over workers, in worker order.
  std::vector<T> result() const {
    std::vector<T> out(size_, T{});
    for (const auto& p : parts_) {
      for (std::size_t i = 0; i < size_; ++i) out[i] += p[i];
    }
    return out;
  }

 private:
  std::size_t size_;
  std::vector<std::vector<T>> parts_;
};

namespace detail {
struct SweepFailure {
  bool failed = false;
  std::uint32_t index = 0;
  std::string what;
};
/// Runs body(worker) for every worker, on its own thread when workers > 1.
void run_workers(std::uint32_t workers, const std::function<void(std::uint32_t)>& body);
/// Throws VisitError for the failed item with the smallest index, if any.
void rethrow_first(bool by_row, const std::vector<SweepFailure>& failures);
}  // namespace detail

/// A D×V sparse matrix of fixed-width per-entry payloads held in a single
/// column-major store. Rows are reached through an index of offsets into
/// that store, so writes through a row view are visible through the column
/// view and vice versa. Structure is fixed once built.
class TokenMatrix {
 public:
  TokenMatrix() = default;

  std::uint32_t rows() const noexcept { return rows_; }
  std::uint32_t cols() const noexcept { return cols_; }
  std::uint32_t width() const noexcept { return width_; }
  std::uint64_t entry_total() const noexcept { return row_ids_.size(); }

  std::uint64_t row_length(std::uint32_t d) const { return row_begin_[d + 1] - row_begin_[d]; }
  std::uint64_t column_length(std::uint32_t w) const { return col_begin_[w + 1] - col_begin_[w]; }
  std::vector<std::uint64_t> row_lengths() const;
  std::vector<std::uint64_t> column_lengths() const;

  ColumnView column(std::uint32_t w) {
    return ColumnView(w, col_begin_[w], col_begin_[w + 1], row_ids_.data(), data_.data(), width_);
  }
  RowView row(std::uint32_t d) {
    return RowView(d, std::span<const std::uint64_t>(row_refs_).subspan(row_begin_[d], row_length(d)), data_.data(),
                   width_, col_begin_);
  }

  /// Raw payload of entry `offset` in the column store.
  std::span<std::uint32_t> entry(std::uint64_t offset) noexcept { return {data_.data() + offset * width_, width_}; }
  std::span<const std::uint32_t> entry(std::uint64_t offset) const noexcept {
    return {data_.data() + offset * width_, width_};
  }
  std::uint32_t entry_row(std::uint64_t offset) const noexcept { return row_ids_[offset]; }
  /// Store offsets of row d's entries, in increasing column id.
  std::span<const std::uint64_t> row_refs(std::uint32_t d) const {
    return std::span<const std::uint64_t>(row_refs_).subspan(row_begin_[d], row_length(d));
  }
  std::uint64_t column_begin(std::uint32_t w) const { return col_begin_[w]; }
  std::span<const std::uint32_t> payload() const noexcept { return data_; }

  /// Calls f(row_id, RowView, worker) once for every row. Rows owned by
  /// different workers run concurrently; the user function may only touch
  /// the entries of the view it is handed.
  template <class F>
  void visit_by_row(F&& f, const PartitionPlan& plan) {
    sweep(true, plan.rows_of, plan.worker_count, [&](std::uint32_t d, std::uint32_t worker) { f(d, row(d), worker); });
  }
  template <class F>
  void visit_by_row(F&& f) {
    visit_by_row(std::forward<F>(f), single_worker());
  }

  template <class F>
  void visit_by_column(F&& f, const PartitionPlan& plan) {
    sweep(false, plan.columns_of, plan.worker_count,
          [&](std::uint32_t w, std::uint32_t worker) { f(w, column(w), worker); });
  }
  template <class F>
  void visit_by_column(F&& f) {
    visit_by_column(std::forward<F>(f), single_worker());
  }

  /// Plan with one worker owning everything.
  PartitionPlan single_worker() const;
  PartitionPlan balanced_plan(std::uint32_t workers) const {
    return PartitionPlan::balanced(row_lengths(), column_lengths(), workers);
  }

  friend bool operator==(const TokenMatrix&, const TokenMatrix&) = default;

 private:
  friend class TokenMatrixBuilder;
  friend TokenMatrix read_matrix(std::istream& in);

  template <class G>
  void sweep(bool by_row, const std::vector<std::vector<std::uint32_t>>& items, std::uint32_t workers, G&& g) {
    std::vector<detail::SweepFailure> failures(workers);
    std::atomic<bool> abort{false};
    detail::run_workers(workers, [&](std::uint32_t worker) {
      for (auto idx : items[worker]) {
        if (abort.load(std::memory_order_relaxed)) return;
        try {
          g(idx, worker);
        } catch (const std::exception& e) {
          failures[worker] = {true, idx, e.what()};
        } catch (...) {
          failures[worker] = {true, idx, "unknown error"};
        }
        if (failures[worker].failed) {
          abort.store(true, std::memory_order_relaxed);
          return;
        }
      }
    });
    detail::rethrow_first(by_row, failures);
  }

  void build_row_index();

  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::uint32_t width_ = 1;
  std::vector<std::uint64_t> col_begin_{0};
  std::vector<std::uint32_t> row_ids_;
  std::vector<std::uint32_t> data_;
  std::vector<std::uint64_t> row_begin_{0};
  std::vector<std::uint64_t> row_refs_;
};

/// Collects entries before the layout is fixed. Duplicate (row, col) cells
/// are allowed.
class TokenMatrixBuilder {
 public:
  TokenMatrixBuilder(std::uint32_t rows, std::uint32_t cols, std::uint32_t width);

  /// Throws std::out_of_range on a bad index or a payload of the wrong width.
  void add_entry(std::uint32_t row, std::uint32_t col, std::span<const std::uint32_t> data);
  void reserve(std::uint64_t entries);

  /// Sorts entries column-major, each column by row id (stable in insertion
  /// order), and builds the row index in increasing column id.
  TokenMatrix finalize() &&;

 private:
  std::uint32_t rows_, cols_, width_;
  std::vector<std::uint32_t> row_ids_;
  std::vector<std::uint32_t> col_ids_;
  std::vector<std::uint32_t> data_;
};

/// Binary dump: magic "WLDAMTX1", u32 D, u32 V, u64 T, u32 M, then for each
/// column a u64 entry count followed by that many (u32 row, u32 payload[M+1])
/// records. Little-endian throughout; the payload width is M+1.
void write_matrix(const TokenMatrix& m, std::ostream& out);
/// Throws std::runtime_error on a bad magic or truncated stream.
TokenMatrix read_matrix(std::istream& in);

}  // namespace warplda
