#ifndef NSC_TESTS_SUPPORT_HPP_
#define NSC_TESTS_SUPPORT_HPP_

#include "nsc/dataset.hpp"
#include "nsc/srd.hpp"
#include "oracle.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace testing {

/// Random labeled Gaussian data with every class holding at least `min_per_class` samples.
inline nsc::Dataset random_dataset(std::mt19937_64 &rng, int p, int n, int classes, int min_per_class = 2,
                                   double shift = 1.0) {
    std::vector<int> cls;
    for (int k = 0; k < classes; ++k) {
        for (int c = 0; c < min_per_class; ++c) {
            cls.push_back(k);
        }
    }
    std::uniform_int_distribution<int> pick(0, classes - 1);
    while (static_cast<int>(cls.size()) < n) {
        cls.push_back(pick(rng));
    }
    std::shuffle(cls.begin(), cls.end(), rng);
    // Keep first appearance order equal to class id order.
    std::vector<int> remap(static_cast<std::size_t>(classes), -1);
    int next = 0;
    for (int &c : cls) {
        if (remap[static_cast<std::size_t>(c)] < 0) {
            remap[static_cast<std::size_t>(c)] = next++;
        }
        c = remap[static_cast<std::size_t>(c)];
    }
    std::normal_distribution<double> noise(0.0, 1.0);
    std::vector<double> offsets(static_cast<std::size_t>(p * classes));
    for (double &o : offsets) {
        o = shift * noise(rng);
    }
    Eigen::MatrixXd x(p, static_cast<Eigen::Index>(cls.size()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (int i = 0; i < p; ++i) {
            x(i, j) = offsets[static_cast<std::size_t>(i * classes + cls[static_cast<std::size_t>(j)])] + noise(rng);
        }
    }
    std::vector<std::string> names;
    for (int k = 0; k < classes; ++k) {
        names.push_back("class" + std::to_string(k));
    }
    return nsc::Dataset(std::move(x), std::move(cls), std::move(names));
}

inline oracle::Data to_oracle(const nsc::Dataset &ds) {
    oracle::Data d;
    d.classes = ds.num_classes();
    d.label = ds.classes();
    for (Eigen::Index j = 0; j < ds.num_samples(); ++j) {
        std::vector<double> s(static_cast<std::size_t>(ds.num_features()));
        for (Eigen::Index i = 0; i < ds.num_features(); ++i) {
            s[static_cast<std::size_t>(i)] = ds.values()(i, j);
        }
        d.samples.push_back(std::move(s));
    }
    return d;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string &name) {
    const auto dir = std::filesystem::temp_directory_path() / ("nsc_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline void write_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream(path) << text;
}

inline std::string read_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Mean test errors (%) of the three thresholding rules on ten cancer data sets,
/// rows listed by increasing best error.
inline const char *cancer_errors_csv() {
    return "dataset,STh,OTh,HTh\n"
           "Lung2,1.33,0,2.7\n"
           "DLBCL,8.7,1.63,0.97\n"
           "Leukemia3,1.11,5.01,4.26\n"
           "Leukemia1,3,11.5,11.79\n"
           "SRBCT,5,5.2,5\n"
           "Breast,6.23,5.7,7.93\n"
           "Leukemia2,13.73,13.2,11.53\n"
           "Cancers,12.05,16.42,16.35\n"
           "Lung1,21.84,18.75,18.62\n"
           "GCM,44,51.7,52.46\n";
}

inline nsc::PerformanceMatrix cancer_errors_matrix() {
    nsc::PerformanceMatrix m;
    m.values.resize(10, 3);
    m.values << 1.33, 0, 2.7, 8.7, 1.63, 0.97, 1.11, 5.01, 4.26, 3, 11.5, 11.79, 5, 5.2, 5, 6.23, 5.7, 7.93, 13.73,
        13.2, 11.53, 12.05, 16.42, 16.35, 21.84, 18.75, 18.62, 44, 51.7, 52.46;
    m.row_names = {"Lung2", "DLBCL", "Leukemia3", "Leukemia1", "SRBCT", "Breast", "Leukemia2", "Cancers", "Lung1", "GCM"};
    m.col_names = {"STh", "OTh", "HTh"};
    return m;
}

}  // namespace testing

#endif  // NSC_TESTS_SUPPORT_HPP_
