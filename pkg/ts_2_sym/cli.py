from argparse import REMAINDER

from ts_2_sym.arg_parser import ArgParser
from ts_2_sym.experiments import STUDIES, Experiments
from ts_2_sym.symbolizer import Symbolizer


FIT_ARGUMENTS = {
    'input': {
        'short': 'i',
        'help': 'Series CSV, one series per column, optional header row',
        'required': True
    },
    'tol': {
        'help': 'Compression tolerance. Default: defaults file (0.1)',
        'type': float
    },
    'alpha': {
        'short': 'a',
        'help': 'Greedy digitization radius. Default: defaults file (0.1)',
        'type': float
    },
    'scl': {
        'help': 'Weight of the length coordinate, 0 ignores lengths. Default: defaults file (1.0)',
        'type': float
    },
    'variant': {
        'short': 'v',
        'help': 'Compression variant. Default: defaults file (apca)',
        'choices': ['apca', 'fapca']
    },
    'digitizer': {
        'short': 'D',
        'help': 'Digitizer, lloyd requires --k. Default: defaults file (greedy)',
        'choices': ['greedy', 'lloyd']
    },
    'k': {
        'help': 'Number of lloyd clusters',
        'type': int
    },
    'seed': {
        'help': 'Lloyd random state. Default: defaults file (0)',
        'type': int
    },
    'alphabet': {
        'short': 'A',
        'help': 'builtin, ascii-extended or a token file with one token per line. Default: builtin',
    },
    'normalize': {
        'short': 'N',
        'help': 'Z-normalise every column before compression',
        'action': 'store_true',
        'default': None
    },
}


def _symbolizer(args: dict) -> Symbolizer:
    return Symbolizer(args.get('tol'), args.get('alpha'), args.get('scl'), args.get('variant'), args.get('digitizer'),
                      args.get('k'), args.get('seed'), args.get('alphabet'), args.get('normalize'))


def _fit_arguments(extra: dict) -> dict:
    return {**FIT_ARGUMENTS, **extra}


def parse_parent_args(args: dict):
    if args.get('fit'):
        return fit(args['fit'])
    if args.get('transform'):
        return transform(args['transform'])
    if args.get('inverse'):
        return inverse(args['inverse'])
    if args.get('roundtrip'):
        return roundtrip(args['roundtrip'])
    if args.get('perturb'):
        return perturb(args['perturb'])
    if args.get('zipf'):
        return zipf(args['zipf'])
    if args.get('forecast'):
        return forecast(args['forecast'])
    if args.get('experiments'):
        return experiments(args['experiments'])
    return 0


def t2s_parent():
    args = ArgParser('TS-2-SYM Commands', None, {
        'fit': {
            'short': 'f',
            'help': 'Fit a symbolic model on series (t2s-fit)',
            'nargs': REMAINDER
        },
        'transform': {
            'short': 't',
            'help': 'Symbolise series with a fitted model (t2s-transform)',
            'nargs': REMAINDER
        },
        'inverse': {
            'short': 'I',
            'help': 'Reconstruct series from symbols (t2s-inverse)',
            'nargs': REMAINDER
        },
        'roundtrip': {
            'short': 'r',
            'help': 'Fit, reconstruct and verify the error bounds (t2s-roundtrip)',
            'nargs': REMAINDER
        },
        'perturb': {
            'short': 'p',
            'help': 'Replace one symbol and compare breakpoint drift (t2s-perturb)',
            'nargs': REMAINDER
        },
        'zipf': {
            'short': 'z',
            'help': 'Rank-frequency profile of symbols (t2s-zipf)',
            'nargs': REMAINDER
        },
        'forecast': {
            'short': 'F',
            'help': 'Forecast series with an n-gram symbol predictor (t2s-forecast)',
            'nargs': REMAINDER
        },
        'experiments': {
            'short': 'e',
            'help': 'Reproduction studies (t2s-experiments)',
            'nargs': REMAINDER
        },
    }).set_arguments()
    exit(parse_parent_args(args))


def fit(parent_args: list = None):
    args = ArgParser('TS-2-SYM Fit', parent_args, _fit_arguments({
        'model': {
            'short': 'm',
            'help': 'Model JSON to write',
            'required': True
        },
        'symbols': {
            'short': 's',
            'help': 'Symbols file to write, one line per column',
            'required': True
        },
        'independent': {
            'help': 'Fit one model per column, written as <model stem>.<column>.json',
            'action': 'store_true'
        },
    })).set_arguments()
    exit(_symbolizer(args).fit(args['input'], args['model'], args['symbols'], args['independent']))


def transform(parent_args: list = None):
    args = ArgParser('TS-2-SYM Transform', parent_args, {
        'model': {
            'short': 'm',
            'help': 'Fitted model JSON',
            'required': True
        },
        'input': {
            'short': 'i',
            'help': 'Series CSV',
            'required': True
        },
        'symbols': {
            'short': 's',
            'help': 'Symbols file to write',
            'required': True
        },
        'tol': {
            'help': 'Compression tolerance. Default: model tol',
            'type': float
        },
        'normalize': {
            'short': 'N',
            'help': 'Z-normalise every column before compression',
            'action': 'store_true',
            'default': None
        },
    }).set_arguments()
    exit(Symbolizer(normalize=args['normalize']).transform(args['model'], args['input'], args['symbols'],
                                                          args['tol']))


def inverse(parent_args: list = None):
    args = ArgParser('TS-2-SYM Inverse', parent_args, {
        'model': {
            'short': 'm',
            'help': 'Fitted model JSON',
            'required': True
        },
        'symbols': {
            'short': 's',
            'help': 'Symbols file, one sequence per line',
            'required': True
        },
        'output': {
            'short': 'o',
            'help': 'CSV to write, one column per symbols line',
            'required': True
        },
        't0': {
            'help': 'Initial value of every line. Default: initial values recorded by the model',
            'type': float
        },
    }).set_arguments()
    exit(Symbolizer().inverse(args['model'], args['symbols'], args['output'], args['t0']))


def roundtrip(parent_args: list = None):
    args = ArgParser('TS-2-SYM Round Trip', parent_args, _fit_arguments({
        'report': {
            'short': 'R',
            'help': 'JSON file receiving the metric rows and bound reports',
        },
    })).set_arguments()
    exit(_symbolizer(args).roundtrip(args['input'], args['report']))


def perturb(parent_args: list = None):
    args = ArgParser('TS-2-SYM Perturb', parent_args, {
        'model': {
            'short': 'm',
            'help': 'Model JSON files, e.g. one apca and one fapca model',
            'nargs': '+',
            'required': True
        },
        'symbols': {
            'short': 's',
            'help': 'Symbols file of each model',
            'nargs': '+',
            'required': True
        },
        'position': {
            'short': 'P',
            'help': '0-based position of the replaced symbol',
            'type': int,
            'required': True
        },
        'replacement': {
            'help': 'Replacement symbol. Default: symbol farthest from the original in the second coordinate',
        },
        't0': {
            'help': 'Initial value. Default: value recorded by the model',
            'type': float
        },
        'line': {
            'short': 'l',
            'help': '1-based line of the symbols files. Default: 1',
            'type': int,
            'default': 1
        },
        'csv': {
            'help': 'Drift table CSV to write',
        },
    }).set_arguments()
    exit(Experiments().perturb(args['model'], args['symbols'], args['position'], args['replacement'], args['t0'],
                               args['line'], args['csv']))


def zipf(parent_args: list = None):
    args = ArgParser('TS-2-SYM Zipf', parent_args, {
        'symbols': {
            'short': 's',
            'help': 'Symbols files',
            'nargs': '+',
            'required': True
        },
        'csv': {
            'help': 'Rank-frequency CSV to write (rank, frequency, log_rank, log_frequency)',
        },
    }).set_arguments()
    exit(Experiments().zipf(args['symbols'], args['csv']))


def forecast(parent_args: list = None):
    args = ArgParser('TS-2-SYM Forecast', parent_args, {
        'model': {
            'short': 'm',
            'help': 'Fitted model JSON',
            'required': True
        },
        'history': {
            'short': 'H',
            'help': 'History CSV',
            'required': True
        },
        'horizon': {
            'help': 'Number of forecast values. Default: defaults file (24)',
            'type': int
        },
        'predictor-order': {
            'short': 'O',
            'help': 'Longest n-gram context. Default: defaults file (3)',
            'type': int
        },
        'delta': {
            'help': 'Additive smoothing of sampled predictions. Default: defaults file (0.1)',
            'type': float
        },
        'mode': {
            'help': 'Prediction mode. Default: defaults file (greedy)',
            'choices': ['greedy', 'sample']
        },
        'seed': {
            'help': 'Seed of sampled predictions. Default: defaults file (0)',
            'type': int
        },
        'truth': {
            'short': 'T',
            'help': 'CSV with the observed continuation, prints MSE and MAE against persistence',
        },
        'corpus': {
            'help': 'Extra symbols file to train the predictor on',
        },
        'output': {
            'short': 'o',
            'help': 'Forecast CSV to write. Default: print the values',
        },
        'column': {
            'short': 'c',
            'help': '0-based column of the history and truth files. Default: 0',
            'type': int,
            'default': 0
        },
    }).set_arguments()
    exit(Experiments().forecast(args['model'], args['history'], args['horizon'], args['predictor_order'],
                                args['delta'], args['mode'], args['seed'], args['truth'], args['corpus'],
                                args['output'], args['column']))


def experiments(parent_args: list = None):
    args = ArgParser('TS-2-SYM Experiments', parent_args, {
        'study': {
            'short': 's',
            'help': f'Studies to run. Default: all ({", ".join(STUDIES)})',
            'nargs': '+',
            'choices': list(STUDIES),
            'default': list(STUDIES)
        },
        'output': {
            'short': 'o',
            'help': 'Directory receiving one CSV per study',
        },
        'samples': {
            'help': 'Monte Carlo windows per window length. Default: 10000',
            'type': int
        },
    }).set_arguments()
    exit(Experiments().studies(args['study'], args['output'], args['samples']))
