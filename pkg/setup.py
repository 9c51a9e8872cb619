from setuptools import find_packages, setup


try:
    setup(
        name='ts_2_sym',
        version='1.0.0',
        description='Symbolic approximation of time series: compression, digitization, reconstruction and '
                    'symbolic forecasting',
        python_requires='>=3.12',
        packages=find_packages(include=['ts_2_sym', 'ts_2_sym.*']),
        package_data={'ts_2_sym': ['templates/*.yml']},
        install_requires=['numpy', 'pandas', 'scipy', 'scikit-learn', 'joblib', 'PyYAML'],
        entry_points={'console_scripts': [
            't2s = ts_2_sym.cli:t2s_parent',
            't2s-fit = ts_2_sym.cli:fit',
            't2s-transform = ts_2_sym.cli:transform',
            't2s-inverse = ts_2_sym.cli:inverse',
            't2s-roundtrip = ts_2_sym.cli:roundtrip',
            't2s-perturb = ts_2_sym.cli:perturb',
            't2s-zipf = ts_2_sym.cli:zipf',
            't2s-forecast = ts_2_sym.cli:forecast',
            't2s-experiments = ts_2_sym.cli:experiments',
        ]},
    )
    exit(0)
except Exception as error:
    print(f'Failed to setup package: {error}')
    exit(1)
