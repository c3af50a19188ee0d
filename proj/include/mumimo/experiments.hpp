#pragma once

#include "mumimo/params.hpp"
#include "mumimo/timecorr.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mumimo::exp {

enum class SweepAxis { SnrDb, BetaFb, Beta1, GroupSize };

std::string to_string(SweepAxis a);
SweepAxis sweep_axis_from_string(const std::string& s);

struct SweepSpec {
    std::string experiment_id = "sweep";
    std::string figure_tag;
    SweepAxis axis = SweepAxis::SnrDb;
    std::vector<double> axis_values;
    std::vector<double> snr_db_groups; // fixed SNR values when the axis is not snr_db
    SystemParams fixed;
    std::vector<FeedbackScheme> schemes;
    std::vector<timecorr::FadingProcess> processes{timecorr::BlockIid{}};
    std::vector<BoundKind> outputs;
    std::int64_t trials = 0;
    std::uint64_t seed = 1;
    double frame_length = 0.0; // > 0 scales rates by the fraction of the frame left for data
    int workers = 0;

    void validate() const;
};

struct ResultRow {
    std::string experiment_id;
    std::string figure_tag;
    std::string scheme;
    int m = 0;
    int l = 0;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double beta_fb = 0.0;
    double alpha = 0.0;
    std::string process;
    double process_param = 0.0;
    int delay = 0;
    double snr_db = 0.0;
    std::string bound_kind;
    double value_bits = 0.0;
    double ci95 = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;

    bool operator==(const ResultRow&) const = default;
};

// Rows in canonical order: SNR group, process, axis value, scheme, output. Outputs
// that do not apply to a combination (error-detection bounds for schemes without
// feedback errors, ceilings for non-regular processes, envelope points where no
// alpha is admissible) produce no row.
std::vector<ResultRow> run_sweep(const SweepSpec& spec);

struct EnvelopePoint {
    double value = 0.0;
    double ci95 = 0.0;
    double best_alpha = 0.0;
    std::int64_t trials = 0;
};

// Pointwise best over the alpha grid (largest rate, or smallest gap for gap-bound rows).
// Grid points where the scheme is undefined are skipped; nullopt if none remain.
std::optional<EnvelopePoint> envelope_over_alpha(const SystemParams& p, const FeedbackScheme& s, BoundKind kind,
                                                 const std::vector<double>& alpha_grid,
                                                 const timecorr::FadingProcess& process, std::int64_t trials,
                                                 std::uint64_t seed, int workers = 0);

std::vector<std::string> figure_tags();
SweepSpec figure_preset(const std::string& tag);

inline constexpr const char* kCsvHeader =
    "experiment_id,figure_tag,scheme,M,L,beta1,beta2,beta_fb,alpha,process,process_param,delay,snr_db,"
    "bound_kind,value_bits,ci95,trials,seed";

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_csv(std::istream& in);

std::string sweep_to_json(const SweepSpec& spec);
SweepSpec sweep_from_json(const std::string& text);

// Writes `path` (CSV) and `path + ".json"` (resolved sweep). Throws IoError on failure.
void write_outputs(const std::string& path, const SweepSpec& spec, const std::vector<ResultRow>& rows);

// Parses "iid", "jakes:F", "gm:r" or "table:path".
timecorr::FadingProcess parse_process(const std::string& text);
// Parses "start:stop:step" or a single value.
std::vector<double> parse_range(const std::string& text);

} // namespace mumimo::exp
