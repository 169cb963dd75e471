import setuptools

setuptools.setup(
    name='grpcalc',
    version='0.1.0',
    description='Exact computations on finitely presented groups: coset enumeration, cohomology, '
                'Betti number approximants and bounds, group rings and girth',
    license='MIT',
    packages=setuptools.find_packages(exclude=('tests*',)),
    install_requires=[
        # moved to requirements.txt
    ],
    package_data={'grpcalc': [
        'logging.conf', 'corpus/*.grp'
    ]},
    entry_points={'console_scripts': ['grpcalc = grpcalc.cli:main']},
    python_requires='>=3.10',
    zip_safe=False,
)
