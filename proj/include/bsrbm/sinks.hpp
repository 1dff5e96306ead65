#pragma once

#include "bsrbm/planted.hpp"
#include "bsrbm/trainer.hpp"

#include <fstream>
#include <memory>
#include <string>
#include <vector>

namespace bsrbm {

/// Trajectory writer producing CSV or JSONL rows.
///
/// Base columns: step, kl_reg, lb, per_param_lb, data_term, model_term,
/// mp_nonconverged_count. With a planted model attached, adds matched q_1..q_P
/// and mean_q. With an eval dataset attached, adds eval_per_param_lb (the
/// lower bound on that dataset, reusing the step's model-term estimate and a
/// fixed evaluation field-sample set).
class FileTrajectorySink : public TrajectorySink {
public:
    enum class Format { csv, jsonl };

    struct Options {
        const PlantedModel* planted = nullptr;
        const SpinDataset* eval_data = nullptr;
        PriorMeans eval_prior;   // prior used for the eval-set bound
        TrainConfig eval_config; // beta/b1/eps_var and the field-sample seed
    };

    FileTrajectorySink(const std::string& path, Format format, Options options = {});

    void on_step(const StepRecord& record, const VariationalParams& vp) override;

    /// Pick csv unless the path ends in .jsonl.
    static Format format_for_path(const std::string& path);

private:
    std::ofstream out_;
    Format format_;
    Options options_;
    Matrix eval_fields_;  // fixed across steps
    bool wrote_header_ = false;
};

/// Keeps every record in memory; used by tests and sweeps.
class RecordingSink : public TrajectorySink {
public:
    void on_step(const StepRecord& record, const VariationalParams& vp) override {
        records.push_back(record);
        last_params = vp;
    }
    std::vector<StepRecord> records;
    VariationalParams last_params;
};

}  // namespace bsrbm
