from setuptools import find_packages, setup

from mahbf import version

setup(
    name="mahbf-workbench",
    version=version.__VERSION__,
    description="Multi-agent deep reinforcement learning for mmWave hybrid beamforming",
    long_description=open("README.md").read() + "\n\n" + open("CHANGELOG.md").read(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=["mahbf.tests*"]),
    install_requires=[
        "numpy>=1.26,<3",
        "scipy>=1.11",
        "loguru==0.7.3",
        "pydantic~=2.9.2",
        "PyYAML~=6.0",
    ],
    classifiers=[
        "Programming Language :: Python :: 3",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
    ],
    entry_points={
        "console_scripts": [
            "mahbf=mahbf.main:main",
        ],
    },
    python_requires=">=3.10",
    keywords="mmwave hybrid beamforming precoding mu-miso reinforcement learning ddpg "
    "multi-agent prioritized replay zero forcing water filling",
)
