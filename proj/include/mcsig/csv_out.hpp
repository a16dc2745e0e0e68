#ifndef MCSIG_CSV_OUT_HPP
#define MCSIG_CSV_OUT_HPP

#include <string>

#include "mcsig/connectivity.hpp"
#include "mcsig/emg.hpp"
#include "mcsig/erp.hpp"

namespace mcsig {

// Result emission. Every file starts with a header row naming columns and
// units; values are printed with %.9g so identical runs emit identical bytes.

void write_erp_csv(const std::string& path, const ERPCurve& erp);
void write_quant_segments_csv(const std::string& path,
                              const ErdErsReport& report);
void write_quant_curve_csv(const std::string& path, const ErdErsReport& report);
void write_tfmap_csv(const std::string& path, const TFMap& map);

// Shared schema for all connectivity results:
// window_start_s,window_end_s,ch_a,ch_b,value
void write_connectivity_csv(const std::string& path, const ConnectivityMap& map);
void write_pair_series_csv(const std::string& path, const PlvPairSeries& series);
void write_reference_series_csv(const std::string& path,
                                const PlvReferenceSeries& series);

void write_onsets_csv(const std::string& path,
                      const std::vector<Index>& onset_samples,
                      const std::vector<double>& onset_times);
void write_emg_quant_csv(const std::string& curve_path,
                         const std::string& metrics_path,
                         const QuantifiedEmg& quant);

}  // namespace mcsig

#endif
