#pragma once

#include <dimred/csv.hpp>
#include <dimred/eigen.hpp>
#include <dimred/error.hpp>
#include <dimred/image.hpp>
#include <dimred/lowrank.hpp>
#include <dimred/matrix.hpp>
#include <dimred/metrics.hpp>
#include <dimred/pca.hpp>
#include <dimred/random.hpp>
#include <dimred/report.hpp>
#include <dimred/svd.hpp>
