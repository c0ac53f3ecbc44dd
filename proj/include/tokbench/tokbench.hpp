#pragma once

#include "tokbench/corpus.hpp"
#include "tokbench/cross_validation.hpp"
#include "tokbench/lattice.hpp"
#include "tokbench/logistic.hpp"
#include "tokbench/metrics.hpp"
#include "tokbench/naive_bayes.hpp"
#include "tokbench/pipeline.hpp"
#include "tokbench/report.hpp"
#include "tokbench/sparse.hpp"
#include "tokbench/subword.hpp"
#include "tokbench/tokenizer.hpp"
#include "tokbench/vectorize.hpp"
